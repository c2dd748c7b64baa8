#pragma once

#include <iosfwd>
#include <string>

#include "flq/instance.hpp"

namespace flq {

/// Line-based text format, UTF-8 with LF endings:
///
///   flq 1
///   meta L=4 n=128 alpha=0.25 R=2 k=32 seed=12345 planted=-52
///   mask 3,17,99                      (omitted for full yield)
///   J <i> <j> <value>                 (nonzero couplings, sorted, i < j)
///   h <i> <value>                     (nonzero biases; none for these instances)
///   loop <v1,v2,...,vl> afm=<i>-<j>   (in generation order)
///
/// write/read round-trip byte-exactly. read validates the declared range,
/// the coupling sum against the loops, the planted energy, and edge
/// membership, raising parse errors with line numbers and validation errors
/// for invariant violations.
void write_instance(const FrustratedLoopInstance& instance, std::ostream& out);
std::string write_instance_string(const FrustratedLoopInstance& instance);
void write_instance_file(const FrustratedLoopInstance& instance, const std::string& path);

FrustratedLoopInstance read_instance(std::istream& in);
FrustratedLoopInstance read_instance_string(const std::string& text);
FrustratedLoopInstance read_instance_file(const std::string& path);

}  // namespace flq
