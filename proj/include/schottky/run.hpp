#pragma once

// Subcommand orchestration: each run_* builds the group from the config,
// executes the experiment, and writes CSV (and SVG where meaningful) into
// the configured output directory. File names carry the config hash;
// outputs are deterministic functions of the config.

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "schottky/config.hpp"
#include "schottky/expander.hpp"
#include "schottky/output.hpp"
#include "schottky/spectra.hpp"
#include "schottky/transfer_operator.hpp"
#include "schottky/word_store.hpp"

namespace schottky {

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> files_written;
};

namespace detail {

inline std::string output_path(const ExperimentConfig& c, const std::string& stem,
                               const std::string& ext) {
    return (std::filesystem::path(c.output.dir) /
            (stem + "_" + format_hex16(config_hash(c)) + ext))
        .string();
}

inline void emit(RunResult& result, const ExperimentConfig& c, const std::string& stem,
                 const std::string& ext, const std::string& content) {
    const std::string path = output_path(c, stem, ext);
    write_file(path, content);
    result.files_written.push_back(path);
}

// resolved config echo: written by every subcommand for reproducibility
inline void emit_config_echo(RunResult& result, const ExperimentConfig& c,
                             const std::string& stem) {
    emit(result, c, stem, ".cfg", emit_config(c));
}

inline TransferParams transfer_params(const ExperimentConfig& c) {
    return TransferParams{c.numerics.truncation, c.numerics.radius_factor};
}

// transfer-operator subcommands require a valid disk system up front
inline SchottkyGroup validated_group(const ExperimentConfig& c) {
    SchottkyGroup g = c.make_group();
    const ValidationReport rep = validate_schottky(g);
    if (!rep.valid) {
        std::string msg = "group fails Schottky validation:";
        for (const auto& issue : rep.issues) msg += " [" + issue.check + "] " + issue.detail + ";";
        throw InvalidGroupError(msg);
    }
    return g;
}

inline std::string join_ints(const std::vector<int>& v, const std::string& sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

}  // namespace detail

inline RunResult run_validate(const ExperimentConfig& c, std::ostream& log) {
    RunResult result;
    const SchottkyGroup g = c.make_group();
    const ValidationReport rep = validate_schottky(g);

    CsvWriter csv(config_hash(c), {"check", "status", "value", "detail"});
    csv.row({"positive radius", rep.valid ? "pass" : "see issues", "", ""});
    csv.row({"min disk gap", rep.min_disk_gap > detail::kMarginTolerance ? "pass" : "fail",
             CsvWriter::cell(rep.min_disk_gap), ""});
    csv.row({"pairing error", rep.worst_pairing_error <= 1e-7 ? "pass" : "fail",
             CsvWriter::cell(rep.worst_pairing_error), ""});
    csv.row({"contraction margin",
             rep.worst_contraction_margin > detail::kMarginTolerance ? "pass" : "fail",
             CsvWriter::cell(rep.worst_contraction_margin), ""});
    for (const auto& issue : rep.issues)
        csv.row({issue.check, "violated", "", issue.detail});
    detail::emit(result, c, "validate", ".csv", csv.str());
    detail::emit_config_echo(result, c, "validate");

    log << "group fingerprint " << format_hex16(g.fingerprint()) << "\n";
    log << (rep.valid ? "schottky conditions hold" : "schottky conditions VIOLATED") << "\n";
    log << "worst contraction margin " << format_real(rep.worst_contraction_margin) << "\n";
    for (const auto& issue : rep.issues) log << "  " << issue.check << ": " << issue.detail << "\n";
    result.exit_code = rep.valid ? 0 : 3;
    return result;
}

inline RunResult run_delta(const ExperimentConfig& c, std::ostream& log) {
    RunResult result;
    const SchottkyGroup g = detail::validated_group(c);
    const DeltaResult d = hausdorff_dimension(g, c.delta.tol, detail::transfer_params(c));

    CsvWriter csv(config_hash(c), {"quantity", "value"});
    csv.row({"delta", CsvWriter::cell(d.delta)});
    csv.row({"eigenvalue_residual", CsvWriter::cell(d.eigenvalue_residual)});
    csv.row({"determinant_zero", CsvWriter::cell(d.determinant_zero)});
    csv.row({"method_difference", CsvWriter::cell(std::abs(d.delta - d.determinant_zero))});
    csv.row({"bisection_steps", CsvWriter::cell(d.bisection_steps)});
    detail::emit(result, c, "delta", ".csv", csv.str());
    detail::emit_config_echo(result, c, "delta");

    log << "delta = " << format_real(d.delta) << " (eigenvalue residual "
        << format_real(d.eigenvalue_residual) << ", determinant zero at "
        << format_real(d.determinant_zero) << ")\n";
    return result;
}

inline RunResult run_zeros(const ExperimentConfig& c, std::ostream& log) {
    RunResult result;
    const SchottkyGroup g = detail::validated_group(c);
    const TransferParams params = detail::transfer_params(c);
    const Character theta = Character::from_theta(c.zeros.theta);

    Box box;
    double delta = 0.0;
    if (c.zeros.box.size() == 4) {
        box = Box{c.zeros.box[0], c.zeros.box[1], c.zeros.box[2], c.zeros.box[3]};
        delta = hausdorff_dimension(g, 1e-12, params).delta;
    } else {
        delta = hausdorff_dimension(g, 1e-12, params).delta;
        box = Box::centered(Complex(delta, 0.0),
                            std::clamp(4.0 * theta.torus_norm1(), 0.3, 0.3 + 1.5 * delta));
    }
    const ResonanceSet set = locate_zeros(g, theta, box, c.zeros.eps, params);

    CsvWriter csv(config_hash(c), {"n", "a", "theta", "re_s", "im_s", "multiplicity",
                                   "certificate_residual", "topological"});
    std::vector<SvgPoint> points;
    for (const auto& z : set.zeros) {
        std::string theta_txt;
        for (std::size_t j = 0; j < theta.theta.size(); ++j)
            theta_txt += (j ? " " : "") + format_real(theta.theta[j]);
        csv.row({"0", "", theta_txt, CsvWriter::cell(z.location.real()),
                 CsvWriter::cell(z.location.imag()), CsvWriter::cell(z.multiplicity),
                 CsvWriter::cell(z.certificate_residual),
                 near_nonpositive_integer(z.location) ? "1" : "0"});
        points.push_back({z.location.real(), z.location.imag(), theta.torus_norm1()});
    }
    detail::emit(result, c, "zeros", ".csv", csv.str());
    if (c.output.svg) {
        SvgScatterSpec svg;
        svg.title = "zeros of L(s, theta), group " + format_hex16(g.fingerprint());
        svg.color_label = "||theta||_1";
        svg.points = points;
        svg.delta_marker = delta;
        svg.config_hash = config_hash(c);
        detail::emit(result, c, "zeros", ".svg", render_svg_scatter(svg));
    }
    detail::emit_config_echo(result, c, "zeros");
    log << set.zeros.size() << " zero(s) located in " << box.describe() << "\n";
    return result;
}

inline RunResult run_scan(const ExperimentConfig& c, std::ostream& log) {
    RunResult result;
    const SchottkyGroup g = detail::validated_group(c);
    CoverScanOptions opts;
    opts.epsilon = c.scan.epsilon;
    opts.eps_locate = c.scan.eps;
    opts.radius_cap = c.scan.radius_cap;
    opts.transfer = detail::transfer_params(c);
    const std::vector<GapReport> reports = cover_gap_report(g, c.scan.covers, opts);

    CsvWriter zeros_csv(config_hash(c), {"n", "a", "theta", "re_s", "im_s", "multiplicity",
                                         "certificate_residual", "topological"});
    CsvWriter gap_csv(config_hash(c),
                      {"n", "index", "delta", "gap_prime", "count_within_epsilon", "count_ratio"});
    std::vector<SvgPoint> points;
    bool any_failure = false;
    double delta = 0.0;
    for (const auto& rep : reports) {
        delta = rep.delta;
        gap_csv.row({CsvWriter::cell(rep.modulus), CsvWriter::cell(rep.index),
                     CsvWriter::cell(rep.delta), CsvWriter::cell(rep.gap_prime),
                     CsvWriter::cell(rep.count_within_epsilon), CsvWriter::cell(rep.count_ratio)});
        for (const auto& cs : rep.characters) {
            if (cs.status.rfind("error", 0) == 0) {
                any_failure = true;
                log << "N=" << rep.modulus << " a=(" << detail::join_ints(cs.a, ",")
                    << ") search failed: " << cs.status << "\n";
                continue;
            }
            std::string theta_txt;
            for (std::size_t j = 0; j < cs.a.size(); ++j)
                theta_txt +=
                    (j ? " " : "") + format_real(static_cast<double>(cs.a[j]) / rep.modulus);
            for (const auto& z : cs.zeros) {
                zeros_csv.row({CsvWriter::cell(rep.modulus), detail::join_ints(cs.a), theta_txt,
                               CsvWriter::cell(z.location.real()),
                               CsvWriter::cell(z.location.imag()),
                               CsvWriter::cell(z.multiplicity),
                               CsvWriter::cell(z.certificate_residual),
                               near_nonpositive_integer(z.location) ? "1" : "0"});
                points.push_back({z.location.real(), z.location.imag(),
                                  Character::lattice(rep.modulus, cs.a).torus_norm1()});
            }
        }
        log << "N=" << rep.modulus << ": gap' = " << format_real(rep.gap_prime) << ", count(eps)/N^r = "
            << format_real(rep.count_ratio) << "\n";
    }
    detail::emit(result, c, "scan_zeros", ".csv", zeros_csv.str());
    detail::emit(result, c, "scan_gap", ".csv", gap_csv.str());
    if (c.output.svg) {
        SvgScatterSpec svg;
        svg.title = "cover resonances near delta, group " + format_hex16(g.fingerprint());
        svg.color_label = "||a/N||_1";
        svg.points = points;
        svg.delta_marker = delta;
        svg.config_hash = config_hash(c);
        detail::emit(result, c, "scan_zeros", ".svg", render_svg_scatter(svg));
    }
    detail::emit_config_echo(result, c, "scan");
    result.exit_code = any_failure ? 4 : 0;
    return result;
}

inline RunResult run_factor_check(const ExperimentConfig& c, std::ostream& log) {
    RunResult result;
    const SchottkyGroup g = detail::validated_group(c);
    const TransferParams params = detail::transfer_params(c);
    WordStore store(g, c.numerics.cache_dir, c.numerics.word_budget);
    const double delta = hausdorff_dimension(g, 1e-12, params).delta;
    const Complex s(delta + c.factor.s_offset, 0.0);
    const ArtinTakagiReport rep = artin_takagi_check(store, c.factor.cover, s, c.factor.terms);

    CsvWriter csv(config_hash(c), {"n", "character_sum_re", "character_sum_im", "filtered_sum_re",
                                   "filtered_sum_im", "residual"});
    for (const auto& t : rep.terms)
        csv.row({CsvWriter::cell(t.n), CsvWriter::cell(t.character_sum.real()),
                 CsvWriter::cell(t.character_sum.imag()), CsvWriter::cell(t.filtered_sum.real()),
                 CsvWriter::cell(t.filtered_sum.imag()), CsvWriter::cell(t.residual)});
    csv.row({"aggregate", "", "", "", "", CsvWriter::cell(rep.aggregate_residual)});
    detail::emit(result, c, "factor", ".csv", csv.str());
    detail::emit_config_echo(result, c, "factor");

    log << "Artin-Takagi termwise check for N=" << rep.modulus << " at s = " << format_real(s.real())
        << (rep.pass ? ": all residuals < 1e-9" : ": FAILED at n = " + std::to_string(rep.first_failing_n))
        << "\n";
    result.exit_code = rep.pass ? 0 : 4;
    return result;
}

inline RunResult run_expander(const ExperimentConfig& c, std::ostream& log) {
    RunResult result;
    const int rank = c.expander.rank > 0 ? c.expander.rank : c.group.rank;

    CsvWriter csv(config_hash(c), {"n", "lambda_1", "argmin_a", "n_sq_lambda_1", "cheeger",
                                   "lower_bound", "upper_bound", "lower_ok", "upper_ok"});
    for (int n : c.expander.sizes) {
        CayleyGraphSpec spec = c.expander.vectors.empty()
                                   ? CayleyGraphSpec::standard(n, rank)
                                   : CayleyGraphSpec{n, rank, c.expander.vectors};
        const Lambda1Result l1 = lambda1(spec);
        csv.row({CsvWriter::cell(n), CsvWriter::cell(l1.value), detail::join_ints(l1.argmin),
                 CsvWriter::cell(n * static_cast<double>(n) * l1.value), "", "", "", "", ""});
    }
    for (int n : c.expander.cheeger_sizes) {
        CayleyGraphSpec spec = c.expander.vectors.empty()
                                   ? CayleyGraphSpec::standard(n, rank)
                                   : CayleyGraphSpec{n, rank, c.expander.vectors};
        if (spec.vertex_count() > 24) {
            log << "skipping Cheeger brute force for N=" << n << " (too many vertices)\n";
            continue;
        }
        const CheegerBoundsReport rep = cheeger_bounds_report(spec);
        csv.row({CsvWriter::cell(n), CsvWriter::cell(rep.lambda_1), detail::join_ints(rep.argmin),
                 CsvWriter::cell(n * static_cast<double>(n) * rep.lambda_1),
                 CsvWriter::cell(rep.cheeger), CsvWriter::cell(rep.lower_bound),
                 CsvWriter::cell(rep.upper_bound), rep.lower_ok ? "1" : "0",
                 rep.upper_ok ? "1" : "0"});
        if (!rep.upper_ok)
            log << "N=" << n << ": Cheeger upper bound degenerate (lambda_1 = "
                << format_real(rep.lambda_1) << ")\n";
    }
    detail::emit(result, c, "expander", ".csv", csv.str());
    detail::emit_config_echo(result, c, "expander");
    log << "expander diagnostics written\n";
    return result;
}

inline RunResult run(const std::string& subcommand, const ExperimentConfig& c, std::ostream& log) {
    if (subcommand == "validate") return run_validate(c, log);
    if (subcommand == "delta") return run_delta(c, log);
    if (subcommand == "zeros") return run_zeros(c, log);
    if (subcommand == "scan") return run_scan(c, log);
    if (subcommand == "factor-check") return run_factor_check(c, log);
    if (subcommand == "expander") return run_expander(c, log);
    throw std::invalid_argument("unknown subcommand " + subcommand);
}

}  // namespace schottky
