#pragma once

// Experiment configuration: a small sectioned key-value text format.
//
//   # comment (also ;)
//   [section]
//   key = value value value
//
// Scalar keys take the last assignment; the repeatable keys `disk`,
// `generator` and `vector` accumulate in file order. parse_config fills
// defaults and validates; emit_config produces the canonical form whose
// re-parse yields an identical config (and whose hash names output files).

#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/util.hpp"

namespace schottky {

struct GroupConfig {
    bool builder = true;
    int rank = 2;
    std::vector<double> lengths = {4.0, 4.0};
    std::vector<Disk> disks;                       // explicit groups
    std::vector<std::array<double, 4>> generators; // explicit groups, S_0..S_{r-1}
};

struct NumericsConfig {
    int truncation = 16;
    double radius_factor = 0.75;
    int orbit_terms = 12;
    std::uint64_t word_budget = 10000000;
    std::string cache_dir;
};

struct DeltaConfig {
    double tol = 1e-12;
};

struct ZerosConfig {
    std::vector<double> theta = {0.0, 0.0};
    double eps = 1e-6;
    std::vector<double> box;  // empty = auto box near delta; else re_lo re_hi im_lo im_hi
};

struct ScanConfig {
    std::vector<int> covers = {1, 2, 3, 4};
    double epsilon = 0.1;
    double eps = 1e-6;
    double radius_cap = 0.0;  // 0 = auto
};

struct FactorConfig {
    int cover = 2;
    int terms = 6;
    double s_offset = 0.5;  // evaluation point is delta + s_offset
};

struct ExpanderConfig {
    int rank = 0;  // 0 = follow the group rank; the O(1/N) Cheeger law is clearest at rank 1
    std::vector<int> sizes = {8, 12, 16, 24, 32, 48, 64, 96, 128};
    std::vector<int> cheeger_sizes = {4, 5, 8, 12};
    std::vector<std::vector<int>> vectors;  // empty = standard +-e_j set
};

struct OutputConfig {
    std::string dir = "out";
    bool svg = true;
};

struct ExperimentConfig {
    GroupConfig group;
    NumericsConfig numerics;
    DeltaConfig delta;
    ZerosConfig zeros;
    ScanConfig scan;
    FactorConfig factor;
    ExpanderConfig expander;
    OutputConfig output;

    SchottkyGroup make_group() const {
        if (group.builder) return build_funnel_group(group.rank, group.lengths);
        std::vector<MoebiusMap> gens;
        for (const auto& q : group.generators)
            gens.push_back(MoebiusMap::from_coefficients(q[0], q[1], q[2], q[3]));
        return SchottkyGroup(group.rank, group.disks, gens);
    }
};

namespace detail {

struct RawEntry {
    std::string value;
    int line = 0;
};

struct RawConfig {
    std::map<std::string, RawEntry> scalars;                      // "section.key"
    std::map<std::string, std::vector<RawEntry>> repeated;        // disk/generator/vector
};

inline bool is_repeatable(const std::string& key) {
    return key == "group.disk" || key == "group.generator" || key == "expander.vector";
}

inline std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline RawConfig tokenize_config(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("unterminated section header", line_no,
                                 static_cast<int>(line.find('[')) + 1);
            section = trimmed(t.substr(1, t.size() - 2));
            if (section.empty()) throw ParseError("empty section name", line_no, 1);
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, static_cast<int>(line.find(t)) + 1);
        const std::string key = trimmed(t.substr(0, eq));
        const std::string value = trimmed(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no, 1);
        if (section.empty()) throw ParseError("key outside any [section]", line_no, 1);
        const std::string full = section + "." + key;
        if (is_repeatable(full))
            raw.repeated[full].push_back({value, line_no});
        else
            raw.scalars[full] = {value, line_no};
    }
    return raw;
}

class FieldReader {
public:
    explicit FieldReader(const RawConfig& raw) : raw_(&raw) {}

    std::optional<std::string> text(const std::string& field) {
        seen_.insert(field);
        auto it = raw_->scalars.find(field);
        if (it == raw_->scalars.end()) return std::nullopt;
        return it->second.value;
    }

    template <typename T>
    void scalar(const std::string& field, T& out) {
        auto v = text(field);
        if (!v || v->empty()) return;
        std::istringstream is(*v);
        T parsed;
        if (!(is >> parsed) || !(is >> std::ws).eof())
            throw SemanticError("cannot parse value '" + *v + "' for " + field, field);
        out = parsed;
    }

    void boolean(const std::string& field, bool& out) {
        auto v = text(field);
        if (!v || v->empty()) return;
        if (*v == "true" || *v == "1")
            out = true;
        else if (*v == "false" || *v == "0")
            out = false;
        else
            throw SemanticError("expected true/false for " + field, field);
    }

    template <typename T>
    void list(const std::string& field, std::vector<T>& out) {
        auto v = text(field);
        if (!v) return;
        out = parse_list<T>(*v, field);
    }

    template <typename T>
    static std::vector<T> parse_list(const std::string& value, const std::string& field) {
        std::vector<T> items;
        std::istringstream is(value);
        T x;
        while (is >> x) items.push_back(x);
        if (!is.eof())
            throw SemanticError("cannot parse list value '" + value + "' for " + field, field);
        return items;
    }

    std::vector<RawEntry> repeated(const std::string& field) {
        seen_.insert(field);
        auto it = raw_->repeated.find(field);
        return it == raw_->repeated.end() ? std::vector<RawEntry>{} : it->second;
    }

    void reject_unknown() const {
        for (const auto& [field, entry] : raw_->scalars)
            if (!seen_.count(field))
                throw SemanticError("unknown config key " + field, field);
        for (const auto& [field, entries] : raw_->repeated)
            if (!seen_.count(field))
                throw SemanticError("unknown config key " + field, field);
    }

private:
    const RawConfig* raw_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline void validate_config(const ExperimentConfig& c) {
    auto require = [](bool ok, const std::string& msg, const std::string& field) {
        if (!ok) throw SemanticError(msg, field);
    };
    require(c.group.rank >= 2, "group.rank must be >= 2", "group.rank");
    if (c.group.builder) {
        require(static_cast<int>(c.group.lengths.size()) == c.group.rank,
                "group.lengths must list one length per generator", "group.lengths");
        for (std::size_t i = 0; i < c.group.lengths.size(); ++i)
            require(c.group.lengths[i] > 0.0,
                    "group.lengths[" + std::to_string(i) + "] must be positive", "group.lengths");
    } else {
        require(static_cast<int>(c.group.disks.size()) == 2 * c.group.rank,
                "explicit group needs 2r disk lines", "group.disk");
        require(static_cast<int>(c.group.generators.size()) == c.group.rank,
                "explicit group needs r generator lines", "group.generator");
        for (std::size_t i = 0; i < c.group.disks.size(); ++i)
            require(c.group.disks[i].radius > 0.0,
                    "group.disk[" + std::to_string(i) + "] radius must be positive", "group.disk");
    }
    require(c.numerics.truncation >= 4, "numerics.truncation must be >= 4", "numerics.truncation");
    require(c.numerics.radius_factor > 0.0 && c.numerics.radius_factor < 1.0,
            "numerics.radius_factor must lie in (0,1)", "numerics.radius_factor");
    require(c.numerics.orbit_terms >= 0, "numerics.orbit_terms must be >= 0",
            "numerics.orbit_terms");
    require(c.delta.tol > 0.0, "delta.tol must be positive", "delta.tol");
    require(static_cast<int>(c.zeros.theta.size()) == c.group.rank,
            "zeros.theta must have one entry per rank", "zeros.theta");
    require(c.zeros.eps > 0.0, "zeros.eps must be positive", "zeros.eps");
    require(c.zeros.box.empty() || c.zeros.box.size() == 4,
            "zeros.box must be empty or re_lo re_hi im_lo im_hi", "zeros.box");
    if (c.zeros.box.size() == 4)
        require(c.zeros.box[0] < c.zeros.box[1] && c.zeros.box[2] < c.zeros.box[3],
                "zeros.box must be a nonempty rectangle", "zeros.box");
    require(!c.scan.covers.empty(), "scan.covers must be nonempty", "scan.covers");
    for (int n : c.scan.covers)
        require(n >= 1, "scan.covers entries must be >= 1", "scan.covers");
    require(c.scan.epsilon > 0.0, "scan.epsilon must be positive", "scan.epsilon");
    require(c.scan.eps > 0.0, "scan.eps must be positive", "scan.eps");
    require(c.scan.radius_cap >= 0.0, "scan.radius_cap must be >= 0", "scan.radius_cap");
    require(c.factor.cover >= 1, "factor.cover must be >= 1", "factor.cover");
    require(c.factor.terms >= 1, "factor.terms must be >= 1", "factor.terms");
    require(c.factor.s_offset > 0.0, "factor.s_offset must be positive", "factor.s_offset");
    require(c.expander.rank >= 0, "expander.rank must be >= 0 (0 follows the group)",
            "expander.rank");
    require(!c.expander.sizes.empty(), "expander.sizes must be nonempty", "expander.sizes");
    for (int n : c.expander.sizes)
        require(n >= 2, "expander.sizes entries must be >= 2", "expander.sizes");
    for (int n : c.expander.cheeger_sizes)
        require(n >= 2, "expander.cheeger_sizes entries must be >= 2", "expander.cheeger_sizes");
    const int cayley_rank = c.expander.rank > 0 ? c.expander.rank : c.group.rank;
    for (const auto& v : c.expander.vectors)
        require(static_cast<int>(v.size()) == cayley_rank,
                "expander.vector entries must have rank components", "expander.vector");
    require(!c.output.dir.empty(), "output.dir must be nonempty", "output.dir");
}

inline ExperimentConfig parse_config(const std::string& text) {
    detail::RawConfig raw = detail::tokenize_config(text);
    detail::FieldReader rd(raw);
    ExperimentConfig c;

    if (auto type = rd.text("group.type")) {
        if (*type == "builder")
            c.group.builder = true;
        else if (*type == "explicit")
            c.group.builder = false;
        else
            throw SemanticError("group.type must be 'builder' or 'explicit'", "group.type");
    }
    rd.scalar("group.rank", c.group.rank);
    rd.list("group.lengths", c.group.lengths);
    for (const auto& entry : rd.repeated("group.disk")) {
        const auto vals = detail::FieldReader::parse_list<double>(entry.value, "group.disk");
        if (vals.size() != 2)
            throw SemanticError("group.disk expects '<center> <radius>'", "group.disk");
        c.group.disks.push_back(Disk{Complex(vals[0], 0.0), vals[1]});
    }
    for (const auto& entry : rd.repeated("group.generator")) {
        const auto vals = detail::FieldReader::parse_list<double>(entry.value, "group.generator");
        if (vals.size() != 4)
            throw SemanticError("group.generator expects '<a> <b> <c> <d>'", "group.generator");
        c.group.generators.push_back({vals[0], vals[1], vals[2], vals[3]});
    }

    rd.scalar("numerics.truncation", c.numerics.truncation);
    rd.scalar("numerics.radius_factor", c.numerics.radius_factor);
    rd.scalar("numerics.orbit_terms", c.numerics.orbit_terms);
    rd.scalar("numerics.word_budget", c.numerics.word_budget);
    if (auto v = rd.text("numerics.cache_dir")) c.numerics.cache_dir = *v;

    rd.scalar("delta.tol", c.delta.tol);

    rd.list("zeros.theta", c.zeros.theta);
    rd.scalar("zeros.eps", c.zeros.eps);
    rd.list("zeros.box", c.zeros.box);

    rd.list("scan.covers", c.scan.covers);
    rd.scalar("scan.epsilon", c.scan.epsilon);
    rd.scalar("scan.eps", c.scan.eps);
    rd.scalar("scan.radius_cap", c.scan.radius_cap);

    rd.scalar("factor.cover", c.factor.cover);
    rd.scalar("factor.terms", c.factor.terms);
    rd.scalar("factor.s_offset", c.factor.s_offset);

    rd.scalar("expander.rank", c.expander.rank);
    rd.list("expander.sizes", c.expander.sizes);
    rd.list("expander.cheeger_sizes", c.expander.cheeger_sizes);
    for (const auto& entry : rd.repeated("expander.vector"))
        c.expander.vectors.push_back(
            detail::FieldReader::parse_list<int>(entry.value, "expander.vector"));

    if (auto v = rd.text("output.dir")) c.output.dir = *v;
    rd.boolean("output.svg", c.output.svg);

    rd.reject_unknown();

    // default theta rank follows the group rank when left at default size
    if (c.zeros.theta.size() != static_cast<std::size_t>(c.group.rank) &&
        c.zeros.theta == std::vector<double>{0.0, 0.0})
        c.zeros.theta.assign(c.group.rank, 0.0);

    validate_config(c);
    return c;
}

// Canonical emission: fixed section/key order, 17-digit reals. Re-parsing
// the emission reproduces the config; its hash labels all outputs.
inline std::string emit_config(const ExperimentConfig& c) {
    std::ostringstream os;
    auto real_list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
        return s;
    };
    auto int_list = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
        return s;
    };
    os << "[group]\n";
    os << "type = " << (c.group.builder ? "builder" : "explicit") << "\n";
    os << "rank = " << c.group.rank << "\n";
    if (c.group.builder) {
        os << "lengths = " << real_list(c.group.lengths) << "\n";
    } else {
        for (const auto& d : c.group.disks)
            os << "disk = " << format_real(d.center.real()) << " " << format_real(d.radius) << "\n";
        for (const auto& q : c.group.generators)
            os << "generator = " << format_real(q[0]) << " " << format_real(q[1]) << " "
               << format_real(q[2]) << " " << format_real(q[3]) << "\n";
    }
    os << "\n[numerics]\n";
    os << "truncation = " << c.numerics.truncation << "\n";
    os << "radius_factor = " << format_real(c.numerics.radius_factor) << "\n";
    os << "orbit_terms = " << c.numerics.orbit_terms << "\n";
    os << "word_budget = " << c.numerics.word_budget << "\n";
    os << "cache_dir = " << c.numerics.cache_dir << "\n";
    os << "\n[delta]\n";
    os << "tol = " << format_real(c.delta.tol) << "\n";
    os << "\n[zeros]\n";
    os << "theta = " << real_list(c.zeros.theta) << "\n";
    os << "eps = " << format_real(c.zeros.eps) << "\n";
    os << "box = " << real_list(c.zeros.box) << "\n";
    os << "\n[scan]\n";
    os << "covers = " << int_list(c.scan.covers) << "\n";
    os << "epsilon = " << format_real(c.scan.epsilon) << "\n";
    os << "eps = " << format_real(c.scan.eps) << "\n";
    os << "radius_cap = " << format_real(c.scan.radius_cap) << "\n";
    os << "\n[factor]\n";
    os << "cover = " << c.factor.cover << "\n";
    os << "terms = " << c.factor.terms << "\n";
    os << "s_offset = " << format_real(c.factor.s_offset) << "\n";
    os << "\n[expander]\n";
    os << "rank = " << c.expander.rank << "\n";
    os << "sizes = " << int_list(c.expander.sizes) << "\n";
    os << "cheeger_sizes = " << int_list(c.expander.cheeger_sizes) << "\n";
    for (const auto& v : c.expander.vectors) os << "vector = " << int_list(v) << "\n";
    os << "\n[output]\n";
    os << "dir = " << c.output.dir << "\n";
    os << "svg = " << (c.output.svg ? "true" : "false") << "\n";
    return os.str();
}

inline std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a(emit_config(c)); }

// Applies a command-line override of the form section.key=value.
inline void apply_override(ExperimentConfig& c, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw SemanticError("override must look like section.key=value", assignment);
    const std::string field = detail::trimmed(assignment.substr(0, eq));
    const std::string value = detail::trimmed(assignment.substr(eq + 1));
    const std::size_t dot = field.find('.');
    if (dot == std::string::npos)
        throw SemanticError("override key must be section.key", field);
    // rebuild via the canonical emission with the key replaced
    std::istringstream in(emit_config(c));
    std::ostringstream out;
    const std::string section = field.substr(0, dot);
    const std::string key = field.substr(dot + 1);
    std::string line, current;
    bool replaced = false;
    while (std::getline(in, line)) {
        const std::string t = detail::trimmed(line);
        if (!t.empty() && t.front() == '[' && t.back() == ']')
            current = detail::trimmed(t.substr(1, t.size() - 2));
        const std::size_t line_eq = line.find('=');
        if (!replaced && current == section && line_eq != std::string::npos &&
            detail::trimmed(line.substr(0, line_eq)) == key && !detail::is_repeatable(field)) {
            out << key << " = " << value << "\n";
            replaced = true;
            continue;
        }
        out << line << "\n";
    }
    if (!replaced) {
        if (detail::is_repeatable(field)) {
            // append to (or create) the section for repeatable keys
            out << "\n[" << section << "]\n" << key << " = " << value << "\n";
        } else {
            throw SemanticError("unknown config key " + field, field);
        }
    }
    c = parse_config(out.str());
}

}  // namespace schottky
