#include "flq/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "flq/error.hpp"

namespace flq {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void validation_fail(const std::string& what) {
    throw Error(ErrorCode::validation, what);
}

}  // namespace

void write_instance(const FrustratedLoopInstance& instance, std::ostream& out) {
    const auto& topo = *instance.topo;
    out << "flq 1\n";
    out << "meta L=" << topo.grid() << " n=" << topo.num_functional()
        << " alpha=" << instance.alpha.to_decimal()
        << " R=" << (instance.range ? std::to_string(*instance.range) : "inf")
        << " k=" << instance.loop_count() << " seed=" << instance.seed
        << " planted=" << instance.planted << "\n";
    const auto broken = topo.broken_qubits();
    if (!broken.empty()) {
        out << "mask ";
        for (size_t i = 0; i < broken.size(); ++i) out << (i ? "," : "") << broken[i];
        out << "\n";
    }
    const auto& edges = topo.edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        if (instance.j[e] != 0)
            out << "J " << edges[e].first << " " << edges[e].second << " " << instance.j[e] << "\n";
    }
    for (const Loop& loop : instance.loops) {
        out << "loop ";
        for (size_t i = 0; i < loop.vertices.size(); ++i)
            out << (i ? "," : "") << loop.vertices[i];
        out << " afm=" << loop.afm_edge.first << "-" << loop.afm_edge.second << "\n";
    }
}

std::string write_instance_string(const FrustratedLoopInstance& instance) {
    std::ostringstream oss;
    write_instance(instance, oss);
    return oss.str();
}

void write_instance_file(const FrustratedLoopInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
    write_instance(instance, out);
    out.flush();
    if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

namespace {

struct Cursor {
    std::string_view text;
    int line;

    void skip_spaces() {
        while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    }

    bool consume(std::string_view token) {
        if (text.substr(0, token.size()) != token) return false;
        text.remove_prefix(token.size());
        return true;
    }

    template <typename Int>
    Int integer(const char* what) {
        skip_spaces();
        Int value{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{}) parse_fail(line, std::string("expected ") + what);
        text.remove_prefix(ptr - text.data());
        return value;
    }

    std::string_view word() {
        skip_spaces();
        size_t end = 0;
        while (end < text.size() && text[end] != ' ') ++end;
        const auto w = text.substr(0, end);
        text.remove_prefix(end);
        return w;
    }
};

}  // namespace

FrustratedLoopInstance read_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        return true;
    };

    if (!next_line() || line != "flq 1") parse_fail(lineno ? lineno : 1, "expected header 'flq 1'");
    if (!next_line()) parse_fail(lineno + 1, "expected meta line");

    Cursor cur{line, lineno};
    if (!cur.consume("meta L=")) parse_fail(lineno, "expected 'meta L='");
    const auto grid = cur.integer<uint32_t>("grid dimension");
    if (!cur.consume(" n=")) parse_fail(lineno, "expected 'n='");
    const auto n_declared = cur.integer<uint32_t>("functional count");
    if (!cur.consume(" alpha=")) parse_fail(lineno, "expected 'alpha='");
    const auto alpha_text = cur.word();
    if (!cur.consume(" R=")) parse_fail(lineno, "expected 'R='");
    RangeLimit range;
    if (cur.consume("inf")) {
        range = std::nullopt;
    } else {
        range = cur.integer<int32_t>("range limit");
        if (*range < 2) validation_fail("declared range limit must be >= 2");
    }
    if (!cur.consume(" k=")) parse_fail(lineno, "expected 'k='");
    const auto k_declared = cur.integer<int64_t>("loop count");
    if (!cur.consume(" seed=")) parse_fail(lineno, "expected 'seed='");
    const auto seed = cur.integer<uint64_t>("seed");
    if (!cur.consume(" planted=")) parse_fail(lineno, "expected 'planted='");
    const auto planted_declared = cur.integer<int64_t>("planted energy");

    Rational alpha;
    try {
        alpha = Rational::parse_decimal(std::string(alpha_text));
    } catch (const Error&) {
        parse_fail(lineno, "malformed alpha value");
    }

    FrustratedLoopInstance inst;
    inst.alpha = alpha;
    inst.range = range;
    inst.seed = seed;
    inst.planted = planted_declared;

    auto base = ChimeraTopology::build(grid);

    bool have_more = next_line();
    if (have_more && line.rfind("mask ", 0) == 0) {
        Cursor mask_cur{std::string_view(line).substr(5), lineno};
        std::vector<Qubit> broken;
        for (;;) {
            broken.push_back(mask_cur.integer<Qubit>("qubit index"));
            if (!mask_cur.consume(",")) break;
        }
        if (!mask_cur.text.empty()) parse_fail(lineno, "trailing characters after mask");
        for (Qubit q : broken)
            if (q >= base.num_qubits()) validation_fail("mask index " + std::to_string(q) + " out of range");
        base = base.with_broken(broken);
        have_more = next_line();
    }
    inst.topo = std::make_shared<ChimeraTopology>(std::move(base));
    const auto& topo = *inst.topo;
    if (topo.num_functional() != n_declared)
        validation_fail("declared n=" + std::to_string(n_declared) + " but topology has " +
                        std::to_string(topo.num_functional()) + " functional qubits");
    inst.j.assign(topo.edges().size(), 0);

    // coupling lines
    int64_t prev_edge = -1;
    while (have_more && line.rfind("J ", 0) == 0) {
        Cursor c{std::string_view(line).substr(2), lineno};
        const auto i = c.integer<Qubit>("qubit index");
        const auto jq = c.integer<Qubit>("qubit index");
        const auto value = c.integer<int32_t>("coupling value");
        if (i >= jq) parse_fail(lineno, "coupling endpoints must satisfy i < j");
        const int64_t e = topo.edge_index(i, jq);
        if (e < 0)
            validation_fail("coupling on (" + std::to_string(i) + "," + std::to_string(jq) +
                            ") which is not a topology edge");
        if (e <= prev_edge) parse_fail(lineno, "coupling lines out of order");
        if (value == 0) parse_fail(lineno, "zero coupling line");
        if (range && std::abs(value) > *range)
            validation_fail("coupling magnitude " + std::to_string(std::abs(value)) +
                            " exceeds declared range " + std::to_string(*range));
        inst.j[e] = value;
        prev_edge = e;
        have_more = next_line();
    }

    // bias lines; these instances have none, and nonzero biases are invalid
    while (have_more && line.rfind("h ", 0) == 0) {
        Cursor c{std::string_view(line).substr(2), lineno};
        c.integer<Qubit>("qubit index");
        const auto value = c.integer<int64_t>("bias value");
        if (value != 0) validation_fail("nonzero bias is not allowed in frustrated-loop instances");
        have_more = next_line();
    }

    // loop lines
    std::vector<int32_t> rebuilt(topo.edges().size(), 0);
    while (have_more && line.rfind("loop ", 0) == 0) {
        Cursor c{std::string_view(line).substr(5), lineno};
        Loop loop;
        for (;;) {
            loop.vertices.push_back(c.integer<Qubit>("vertex"));
            if (!c.consume(",")) break;
        }
        if (!c.consume(" afm=")) parse_fail(lineno, "expected 'afm='");
        const auto au = c.integer<Qubit>("afm endpoint");
        if (!c.consume("-")) parse_fail(lineno, "expected '-' in afm edge");
        const auto av = c.integer<Qubit>("afm endpoint");
        loop.afm_edge = {std::min(au, av), std::max(au, av)};

        const size_t len = loop.vertices.size();
        if (len < 3) validation_fail("loop shorter than 3 vertices");
        std::vector<Qubit> sorted_vertices = loop.vertices;
        std::sort(sorted_vertices.begin(), sorted_vertices.end());
        if (std::adjacent_find(sorted_vertices.begin(), sorted_vertices.end()) !=
            sorted_vertices.end())
            validation_fail("loop revisits a vertex");
        bool afm_found = false;
        for (size_t v = 0; v < len; ++v) {
            Qubit a = loop.vertices[v];
            Qubit b = loop.vertices[(v + 1) % len];
            const int64_t e = topo.edge_index(a, b);
            if (e < 0)
                validation_fail("loop step (" + std::to_string(a) + "," + std::to_string(b) +
                                ") is not a topology edge");
            const Edge canon{std::min(a, b), std::max(a, b)};
            const bool is_afm = canon == loop.afm_edge;
            rebuilt[e] += is_afm ? 1 : -1;
            afm_found |= is_afm;
        }
        if (!afm_found) validation_fail("afm edge is not an edge of its loop");
        inst.loops.push_back(std::move(loop));
        have_more = next_line();
    }
    if (have_more) parse_fail(lineno, "unrecognized line '" + line + "'");

    if (inst.loop_count() != k_declared)
        validation_fail("declared k=" + std::to_string(k_declared) + " but found " +
                        std::to_string(inst.loop_count()) + " loops");
    if (rebuilt != inst.j)
        validation_fail("couplings do not equal the edgewise sum of the loops");
    if (planted_energy(inst) != planted_declared)
        validation_fail("declared planted energy " + std::to_string(planted_declared) +
                        " does not match the loop lengths");

    return inst;
}

FrustratedLoopInstance read_instance_string(const std::string& text) {
    std::istringstream iss(text);
    return read_instance(iss);
}

FrustratedLoopInstance read_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
    return read_instance(in);
}

}  // namespace flq
