/*
 * fhharm_cli.cpp -- command-line front end.
 *
 * Subcommands: axial, decompose, primitive, plan, density, residual,
 * growth, lemmas, selftest.  Machine-first output (CSV or JSON, --pretty
 * for indented JSON), deterministic byte-for-byte for identical
 * configuration.  Exit status: 0 on success, 1 if any asserted inequality
 * failed, 2 on usage or input errors.  Thread count comes only from the
 * FHHARM_THREADS environment variable.
 */
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fhharm/construct.hpp"
#include "fhharm/kuran.hpp"
#include "fhharm/polycalc.hpp"
#include "fhharm/spheremeans.hpp"
#include "fhharm/verify.hpp"

using namespace fhharm;

namespace {

/* --------------------------- plumbing ----------------------------- */

struct CommonOpts {
    long precision = BigFloat::kDefaultPrec;
    std::uint64_t seed = 0x5eed5eedULL;
    std::string out;            // empty: stdout
    std::string format = "csv"; // csv | json
    bool pretty = false;
    bool relaxed = false;       // mode: literal | relaxed
    std::string config;         // optional JSON config file
};

struct OptRefs {
    CLI::Option* precision = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* pretty = nullptr;
    CLI::Option* relaxed = nullptr;
};

OptRefs add_common(CLI::App* cmd, CommonOpts& c) {
    OptRefs r;
    r.precision = cmd->add_option("--precision", c.precision,
                                  "working precision in bits (this build supports exactly 256)");
    r.seed = cmd->add_option("--seed", c.seed, "seed for sampled estimates (echoed in output)");
    r.out = cmd->add_option("--out", c.out, "output file (default: stdout)");
    r.format = cmd->add_option("--format", c.format, "output format: csv or json")
                   ->check(CLI::IsMember({"csv", "json"}));
    r.pretty = cmd->add_flag("--pretty", c.pretty, "indent JSON output");
    r.relaxed = cmd->add_flag("--relaxed", c.relaxed,
                              "relaxed admission scale (exploration mode; certified bounds "
                              "that require the literal scale are reported, not enforced)");
    cmd->add_option("--config", c.config, "JSON config file; explicit flags override it");
    return r;
}

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
    return j;
}

// Config merge: a key fills a field only when the flag was not given.
template <typename T>
void cfg(const nlohmann::json& j, const char* key, const CLI::Option* opt, T& target) {
    if (opt != nullptr && opt->count() > 0) return;
    if (!j.contains(key)) return;
    j.at(key).get_to(target);
}

void cfg_mode(const nlohmann::json& j, const CLI::Option* opt, bool& relaxed) {
    if (opt != nullptr && opt->count() > 0) return;
    if (!j.contains("mode")) return;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "relaxed") relaxed = true;
    else if (mode == "literal") relaxed = false;
    else throw CLI::ValidationError("--config", "mode must be \"literal\" or \"relaxed\"");
}

void apply_common_config(const nlohmann::json& j, const OptRefs& r, CommonOpts& c) {
    cfg(j, "precision", r.precision, c.precision);
    cfg(j, "seed", r.seed, c.seed);
    cfg(j, "out", r.out, c.out);
    cfg(j, "format", r.format, c.format);
    cfg(j, "pretty", r.pretty, c.pretty);
    cfg_mode(j, r.relaxed, c.relaxed);
    if (c.format != "csv" && c.format != "json")
        throw CLI::ValidationError("--config", "format must be \"csv\" or \"json\"");
}

void require_precision(long bits) {
    if (bits != BigFloat::kDefaultPrec)
        throw CLI::ValidationError(
            "--precision", "this build computes at exactly " +
                               std::to_string(BigFloat::kDefaultPrec) + " bits");
}

void emit(const CommonOpts& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void echo_config(Report& rep, const CommonOpts& c, const char* subcommand) {
    rep.meta.emplace_back("subcommand", subcommand);
    rep.meta.emplace_back("seed", std::to_string(c.seed));
}

std::string render(const Report& rep, const CommonOpts& c) {
    return c.format == "json" ? rep.json(c.pretty) : rep.csv();
}

Polynomial parse_poly_arg(const std::string& text, unsigned N) {
    if (N < 1) throw CLI::ValidationError("--N", "need N >= 1");
    return parse_polynomial(text, N);
}

/* --------------------------- subcommand state --------------------- */

struct AxialArgs {
    CommonOpts common;
    OptRefs refs;
    unsigned m = 0;
    unsigned N = 0;
    std::string r;  // optional radius for the exact mean
};

struct PolyArgs {
    CommonOpts common;
    OptRefs refs;
    std::string poly;
    unsigned N = 0;
    unsigned k = 0;     // primitive only
    std::string r;      // optional radius
};

struct PlanArgs {
    CommonOpts common;
    OptRefs refs;
    unsigned N = 3;
    std::string C = "1";
    unsigned long k_max = 4;
    unsigned height = 1;
    unsigned degree_cap = 2;
    std::string c_prime;      // optional override, rational text
    bool certify = false;     // run the growth-lemma sweep for C'
    CLI::Option* opt_N = nullptr;
    CLI::Option* opt_C = nullptr;
    CLI::Option* opt_kmax = nullptr;
    CLI::Option* opt_height = nullptr;
    CLI::Option* opt_cap = nullptr;
};

struct DensityArgs {
    CommonOpts common;
    OptRefs refs;
    unsigned long k = 1;
    unsigned long T = 100000000UL;
    std::string plan_path;
    std::vector<unsigned long> ell_list;
    CLI::Option* opt_k = nullptr;
    CLI::Option* opt_T = nullptr;
};

struct ResidualArgs {
    CommonOpts common;
    OptRefs refs;
    std::string plan_path;
    unsigned long k = 1;
    unsigned long n = 0;
    unsigned long s = 0;
    std::string r = "4/5";
    unsigned long n_max = 0;
    CLI::Option* opt_k = nullptr;
    CLI::Option* opt_s = nullptr;
    CLI::Option* opt_r = nullptr;
    CLI::Option* opt_nmax = nullptr;
};

struct GrowthArgs {
    CommonOpts common;
    OptRefs refs;
    std::string plan_path;
    std::string C;  // empty: the C the plan was selected with
    unsigned long n_max = 0;
    std::string r_lo = "1/2";
    std::string r_hi = "50";
    unsigned r_points = 50;
    unsigned exact_checks = 5;
    CLI::Option* opt_rlo = nullptr;
    CLI::Option* opt_rhi = nullptr;
    CLI::Option* opt_rpts = nullptr;
};

struct LemmaArgs {
    CommonOpts common;
    OptRefs refs;
    unsigned N = 3;
    unsigned long samples = 4096;
    unsigned r_points = 12;
};

struct SelftestArgs {
    CommonOpts common;
    OptRefs refs;
    unsigned long k_max = 1;
};

/* --------------------------- handlers ----------------------------- */

int run_axial(const AxialArgs& a) {
    const AxialHarmonic I = axial_harmonic(a.m, a.N);
    if (a.common.format == "json") {
        nlohmann::ordered_json j;
        j["m"] = a.m;
        j["N"] = a.N;
        j["poly"] = to_text(I.h.poly);
        j["m2_squared_at_1"] = rat_to_string(m2_mean_squared(I.h.poly, Rational(1)));
        if (!a.r.empty()) {
            const Rational r = rat_from_string(a.r);
            j["r"] = rat_to_string(r);
            j["m2_squared_at_r"] = rat_to_string(m2_mean_squared(I.h.poly, r));
        }
        emit(a.common, j.dump(a.common.pretty ? 2 : -1) + "\n");
    } else {
        std::string out = to_text(I.h.poly) + "\n";
        if (!a.r.empty()) {
            const Rational r = rat_from_string(a.r);
            out += "m2_squared(" + rat_to_string(r) + ") = " +
                   rat_to_string(m2_mean_squared(I.h.poly, r)) + "\n";
        }
        emit(a.common, out);
    }
    return 0;
}

int run_decompose(const PolyArgs& a) {
    const Polynomial p = parse_poly_arg(a.poly, a.N);
    const auto parts = graded_parts(p);
    if (parts.size() != 1)
        throw std::invalid_argument(
            "decompose: input must be homogeneous (one graded part); got " +
            std::to_string(parts.size()) + " parts");
    const KuranDecomposition dec = kuran_decompose(p);
    emit(a.common, kuran_to_json(dec, a.common.pretty) + "\n");
    return 0;
}

int run_primitive(const PolyArgs& a) {
    const Polynomial p = parse_poly_arg(a.poly, a.N);
    // P_k is linear; apply it per homogeneous harmonic component.
    Polynomial result = Polynomial::zero(a.N);
    for (const HomogeneousHarmonic& H : homogeneous_components(p))
        result = result + primitive(H, a.k).poly;
    if (a.common.format == "json") {
        nlohmann::ordered_json j;
        j["k"] = a.k;
        j["N"] = a.N;
        j["poly"] = to_text(result);
        if (!a.r.empty()) {
            const Rational r = rat_from_string(a.r);
            j["r"] = rat_to_string(r);
            j["m2_squared_at_r"] = rat_to_string(m2_mean_squared(result, r));
        }
        emit(a.common, j.dump(a.common.pretty ? 2 : -1) + "\n");
    } else {
        std::string out = to_text(result) + "\n";
        if (!a.r.empty()) {
            const Rational r = rat_from_string(a.r);
            out += "m2_squared(" + rat_to_string(r) + ") = " +
                   rat_to_string(m2_mean_squared(result, r)) + "\n";
        }
        emit(a.common, out);
    }
    return 0;
}

int run_plan(PlanArgs& a, const nlohmann::json& jcfg) {
    cfg(jcfg, "N", a.opt_N, a.N);
    cfg(jcfg, "C", a.opt_C, a.C);
    cfg(jcfg, "k_max", a.opt_kmax, a.k_max);
    cfg(jcfg, "coefficient_height", a.opt_height, a.height);
    cfg(jcfg, "degree_cap", a.opt_cap, a.degree_cap);
    DensePlan plan = default_dense_sequence(a.N, a.height, a.degree_cap);
    if (a.certify) {
        const CPrimeCertificate cert = certify_c_prime();
        if (!cert.stable)
            throw std::domain_error("plan: growth-lemma sweep did not stabilize; "
                                    "refusing an uncertified C'");
        plan.c_prime = cert.c_prime;
        plan.c_prime_provenance = cert.provenance;
    } else if (!a.c_prime.empty()) {
        plan.c_prime = rat_from_string(a.c_prime);
        if (plan.c_prime <= 0) throw std::invalid_argument("plan: C' must be positive");
        plan.c_prime_provenance = "user-supplied";
    }
    const Rational C = rat_from_string(a.C);
    if (C <= 0) throw std::invalid_argument("plan: C must be positive");
    const EllSequence ell = select_ell(plan, C, a.k_max);
    emit(a.common, plan_to_json(plan, ell, a.common.pretty) + "\n");
    return 0;
}

int run_density(DensityArgs& a, const nlohmann::json& jcfg) {
    cfg(jcfg, "k", a.opt_k, a.k);
    cfg(jcfg, "T", a.opt_T, a.T);
    if (a.plan_path.empty() == a.ell_list.empty())
        throw CLI::ValidationError("density", "give exactly one of --plan or --ell");
    EllSequence ell;
    std::string hash, source;
    if (!a.plan_path.empty()) {
        const std::string text = read_file(a.plan_path);
        ell = plan_from_json(text).second;
        hash = git_blob_sha1(text);
        source = a.plan_path;
    } else {
        ell.C = Rational(0);        // ad hoc list: no plan constants behind it
        ell.c_prime = Rational(0);
        ell.ell = a.ell_list;
        std::string key = "ell";
        for (unsigned long l : a.ell_list) key += " " + std::to_string(l);
        hash = git_blob_sha1(key);
        source = "adhoc-ell";
    }
    const Scale scale = a.common.relaxed ? Scale::relaxed_at(2) : Scale::literal();
    const DensityReport d = lower_density(a.k, ell, a.T, scale);
    Report rep = density_report(d, hash);
    rep.meta.emplace_back("plan_source", source);
    echo_config(rep, a.common, "density");
    emit(a.common, render(rep, a.common));
    return 0;
}

int run_residual(ResidualArgs& a, const nlohmann::json& jcfg) {
    cfg(jcfg, "k", a.opt_k, a.k);
    cfg(jcfg, "s", a.opt_s, a.s);
    cfg(jcfg, "r", a.opt_r, a.r);
    cfg(jcfg, "n_max", a.opt_nmax, a.n_max);
    const std::string text = read_file(a.plan_path);
    auto [plan, ell] = plan_from_json(text);
    const Scale scale = a.common.relaxed ? Scale::relaxed_at(2) : Scale::literal();
    const Rational r = rat_from_string(a.r);
    if (a.s == 0) a.s = a.n * a.n + ell.at(a.k);  // default: first admitted order
    if (a.n_max == 0) a.n_max = a.n + 2;
    const ResidualReport res = fhc_residual(plan, ell, a.k, a.n, a.s, r, a.n_max, scale);
    Report rep = residual_report(res, git_blob_sha1(text));
    rep.meta.emplace_back("plan_source", a.plan_path);
    echo_config(rep, a.common, "residual");
    emit(a.common, render(rep, a.common));
    return (res.f_ok && res.g_ok && res.total_ok) ? 0 : 1;
}

int run_growth(GrowthArgs& a, const nlohmann::json& jcfg) {
    cfg(jcfg, "r_lo", a.opt_rlo, a.r_lo);
    cfg(jcfg, "r_hi", a.opt_rhi, a.r_hi);
    cfg(jcfg, "r_points", a.opt_rpts, a.r_points);
    const std::string text = read_file(a.plan_path);
    auto [plan, ell] = plan_from_json(text);
    const Scale scale = a.common.relaxed ? Scale::relaxed_at(2) : Scale::literal();
    if (a.n_max == 0) throw CLI::ValidationError("--n-max", "a positive truncation is required");
    const TruncatedH h = assemble_truncated(plan, ell, a.n_max, scale);
    const Rational C = a.C.empty() ? ell.C : rat_from_string(a.C);
    const std::vector<Rational> grid =
        log_spaced_grid(rat_from_string(a.r_lo), rat_from_string(a.r_hi), a.r_points);
    const GrowthTable table = growth_profile(h, grid, C, a.exact_checks);
    Report rep = growth_report(table, git_blob_sha1(text));
    rep.meta.emplace_back("plan_source", a.plan_path);
    echo_config(rep, a.common, "growth");
    emit(a.common, render(rep, a.common));
    return (table.all_within_bound && table.exact_agree) ? 0 : 1;
}

// Fixed documented battery over the supporting lemmas; one row per check.
int run_lemmas(LemmaArgs& a) {
    Report rep;
    rep.meta.emplace_back("report", "lemmas");
    rep.meta.emplace_back("mode", a.common.relaxed ? "relaxed" : "literal");
    rep.meta.emplace_back("precision_bits", std::to_string(BigFloat::kDefaultPrec));
    rep.meta.emplace_back("N", std::to_string(a.N));
    echo_config(rep, a.common, "lemmas");
    rep.columns = {"check", "params", "value", "target", "ok"};
    bool all_ok = true;
    auto row = [&](const std::string& check, const std::string& params, const std::string& value,
                   const std::string& target, bool ok) {
        rep.rows.push_back({check, params, value, target, ok ? "true" : "false"});
        all_ok = all_ok && ok;
    };

    // Growth lemma: normalized sums stay bounded on the documented grid.
    const std::vector<Rational> grid = log_spaced_grid(rat(2), rat(50), a.r_points);
    for (unsigned long ell : {1UL, 2UL, 5UL, 8UL}) {
        const unsigned long us[2] = {0, ell - 1};
        const std::size_t ucount = (ell == 1) ? 1 : 2;
        for (std::size_t i = 0; i < ucount; ++i) {
            const GrowthLemmaReport g = growth_lemma_check(a.N, ell, us[i], grid);
            row("growth_lemma",
                "ell=" + std::to_string(ell) + " u=" + std::to_string(us[i]),
                format_bigfloat(g.max_normalized, 20), "<= 2",
                g.max_normalized <= BigFloat(2));
        }
    }

    // Help series: argmax near floor(r), normalizations bounded.
    for (long rr : {2L, 10L, 50L}) {
        const HelpSeriesReport hs = help_series_check(rat(rr));
        const bool near = hs.argmax + 1 >= static_cast<unsigned long>(rr) &&
                          hs.argmax <= static_cast<unsigned long>(rr) + 1;
        row("help_series_argmax", "r=" + std::to_string(rr), std::to_string(hs.argmax),
            "floor(r) +- 1", near);
        row("help_series_sum", "r=" + std::to_string(rr),
            format_bigfloat(hs.normalized_sum, 20), "<= 2", hs.normalized_sum <= BigFloat(2));
        row("help_series_max", "r=" + std::to_string(rr),
            format_bigfloat(hs.normalized_max, 20), "<= 1", hs.normalized_max <= BigFloat(1));
    }

    // Skip lemma: geometric closed form and a unimodal truncated corpus.
    SkipSequence geo;
    geo.kind = SkipSequence::Kind::GeometricDecreasing;
    geo.x = rat(1, 2);
    const SkipLemmaReport sg = skip_lemma_check(geo, 2, 0);
    row("skip_geometric", "x=1/2 ell=2 u=0",
        rat_to_string(sg.lhs) + " <= " + rat_to_string(sg.rhs), "lhs <= rhs", sg.holds);
    SkipSequence uni;
    uni.kind = SkipSequence::Kind::Truncated;
    {
        // r^(2n)/n!^2 for r = 4: rises to n = 4, then falls.
        Rational t(1);
        for (unsigned long n = 0; n <= 40; ++n) {
            if (n > 0) t = t * rat(16, static_cast<long>(n * n));
            uni.terms.push_back(t);
        }
        uni.peak = 4;
    }
    const SkipLemmaReport su = skip_lemma_check(uni, 3, 1);
    row("skip_unimodal", "series r=4 ell=3 u=1",
        rat_to_string(su.lhs) + " <= " + rat_to_string(su.rhs), "lhs <= rhs", su.holds);

    // Log-concavity: a finite onset in every dimension of interest.
    for (unsigned N : {2u, 3u, 4u, 5u, 6u}) {
        const ConcavityReport cr = log_concavity_check(N, rat(10), 1, 200);
        row("log_concavity", "N=" + std::to_string(N) + " n=1..200",
            cr.onset ? std::to_string(*cr.onset) : "none", "finite onset",
            cr.onset.has_value());
    }

    // Poisson sup bound on the axial harmonics.
    const PoissonConstant pc = poisson_constant(a.N);
    for (unsigned m : {1u, 2u, 3u}) {
        const AxialHarmonic I = axial_harmonic(m, a.N);
        const PoissonMargin pm =
            poisson_bound_check(I.h.poly, rat(1, 4), a.samples, pc, a.common.seed);
        row("poisson_margin", "axial m=" + std::to_string(m) + " r=1/4",
            format_bigfloat(pm.margin, 20), ">= -slack", pm.ok);
    }

    emit(a.common, render(rep, a.common));
    return all_ok ? 0 : 1;
}

// End-to-end smoke battery.  --k-max 0 runs on the empty plan and passes
// trivially; the default exercises stage 1 at its smallest admissible block.
int run_selftest(SelftestArgs& a) {
    std::ostringstream out;
    bool all_ok = true;
    auto line = [&](bool ok, const std::string& what) {
        out << (ok ? "[pass] " : "[FAIL] ") << what << "\n";
        all_ok = all_ok && ok;
    };
    const Scale scale = a.common.relaxed ? Scale::relaxed_at(2) : Scale::literal();
    out << "selftest: mode=" << scale.name() << " k_max=" << a.k_max << "\n";

    if (a.k_max == 0) {
        const DensePlan plan = default_dense_sequence(3, 1, 2);
        const EllSequence ell = select_ell(plan, Rational(1), 0);
        const TruncatedH h = assemble_truncated(plan, ell, 100, scale);
        line(h.blocks.empty(), "empty plan produces the zero truncation");
        line(h.norm2(rat(2)) == 0, "zero truncation has zero mean");
        emit(a.common, out.str());
        return all_ok ? 0 : 1;
    }

    const DensePlan plan = default_dense_sequence(3, 1, 2);
    const EllSequence ell = select_ell(plan, Rational(1), a.k_max);
    out << "ell:";
    for (unsigned long k = 1; k <= ell.k_max(); ++k) out << " " << ell.at(k);
    out << "\n";

    // Density of the stage-1 order set at a modest horizon.
    const DensityReport d = lower_density(1, ell, 1000000UL, scale);
    const Rational ten_pct = d.target / Rational(10);
    line(d.ratio >= d.target - ten_pct,
         "density: ratio " + rat_to_string(d.ratio) + " within 10% of target " +
             rat_to_string(d.target));

    // Residual at the smallest admissible stage-1 block, first admitted order.
    const unsigned long l1 = ell.at(1);
    const unsigned long step = l1 * 2;
    unsigned long n = ((scale.threshold(l1) + step - 1) / step) * step;
    if ((n / step) % 2 == 0) n += step;  // n = odd multiple of l1 2^1
    const unsigned long s = n * n + l1;
    const Rational r = rat(4, 5);
    const ResidualReport res = fhc_residual(plan, ell, 1, n, s, r, n + 2, scale);
    line(res.er2_certified, "residual: (e r)^2 <= l_1 certified at r = 4/5");
    line(res.f_ok, "residual: F part " + rat_to_string(res.f_part2) + " <= " +
                       rat_to_string(res.part_bound2));
    line(res.g_ok, "residual: G part (truncated " + rat_to_string(res.g_part2_truncated) +
                       " + tail " + format_bigfloat(res.g_tail2, 10) + ") <= " +
                       rat_to_string(res.part_bound2));
    line(res.total_ok, "residual: total <= " + rat_to_string(res.total_bound2));

    // Growth envelope on a short grid around the block.
    const TruncatedH h = assemble_truncated(plan, ell, n + 2, scale);
    const GrowthTable table = growth_profile(h, log_spaced_grid(rat(1, 2), rat(2), 8), ell.C, 3);
    line(table.all_within_bound, "growth: all ratios within the envelope");
    line(table.exact_agree, "growth: float means match exact rational means");

    // Lemma spot checks.
    SkipSequence geo;
    geo.kind = SkipSequence::Kind::GeometricDecreasing;
    geo.x = rat(1, 2);
    line(skip_lemma_check(geo, 2, 0).holds, "skip lemma: geometric x=1/2 ell=2");
    line(log_concavity_check(3, rat(10), 1, 100).onset.has_value(),
         "log-concavity: onset exists for N=3");
    const PoissonMargin pm =
        poisson_bound_check(axial_harmonic(2, 3).h.poly, rat(1, 4), 2048, a.common.seed);
    line(pm.ok, "poisson: sup <= c_N M2(2r) margin " + format_bigfloat(pm.margin, 10));

    emit(a.common, out.str());
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact construction and verification of a frequently hypercyclic "
                 "harmonic function of minimal L2 growth"};
    app.require_subcommand(1);

    AxialArgs ax;
    CLI::App* axial = app.add_subcommand("axial", "print the axial harmonic I_{m,N}");
    ax.refs = add_common(axial, ax.common);
    axial->add_option("--m", ax.m, "degree")->required();
    axial->add_option("--N", ax.N, "dimension (>= 2)")->required();
    axial->add_option("--r", ax.r, "also print the exact squared mean at this radius");

    PolyArgs dec;
    CLI::App* decomp = app.add_subcommand("decompose", "Kuran decomposition of a homogeneous "
                                                       "harmonic polynomial");
    dec.refs = add_common(decomp, dec.common);
    decomp->add_option("--poly", dec.poly, "polynomial text, e.g. \"1 * x1^2 - 1 * x2^2\"")
        ->required();
    decomp->add_option("--N", dec.N, "number of variables")->required();

    PolyArgs prim;
    CLI::App* primc = app.add_subcommand("primitive", "canonical k-th x1-antiderivative P_k");
    prim.refs = add_common(primc, prim.common);
    primc->add_option("--poly", prim.poly, "harmonic polynomial text")->required();
    primc->add_option("--N", prim.N, "number of variables")->required();
    primc->add_option("--k", prim.k, "antiderivative order")->required();
    primc->add_option("--r", prim.r, "also print the exact squared mean at this radius");

    PlanArgs pl;
    CLI::App* planc = app.add_subcommand("plan", "build a dense-sequence plan and its l_k "
                                                 "selection, as JSON");
    pl.refs = add_common(planc, pl.common);
    pl.opt_N = planc->add_option("--N", pl.N, "dimension (default 3)");
    pl.opt_C = planc->add_option("--C", pl.C, "target growth constant (rational, default 1)");
    pl.opt_kmax = planc->add_option("--k-max", pl.k_max, "number of stages (default 4)");
    pl.opt_height = planc->add_option("--height", pl.height,
                                      "coefficient height of the generating set (default 1)");
    pl.opt_cap = planc->add_option("--degree-cap", pl.degree_cap,
                                   "degree cap of the generating set (default 2)");
    planc->add_option("--c-prime", pl.c_prime, "override the growth-lemma constant C'");
    planc->add_flag("--certify-c-prime", pl.certify,
                    "run the growth-lemma sweep and use its certified constant");

    DensityArgs den;
    CLI::App* denc = app.add_subcommand("density", "lower density of the admitted orders");
    den.refs = add_common(denc, den.common);
    den.opt_k = denc->add_option("--k", den.k, "stage (default 1)");
    den.opt_T = denc->add_option("--T", den.T, "horizon (default 10^8)");
    denc->add_option("--plan", den.plan_path, "plan JSON file");
    denc->add_option("--ell", den.ell_list, "ad hoc l_k list, e.g. --ell 5,9,21")
        ->delimiter(',');

    ResidualArgs resid;
    CLI::App* resc = app.add_subcommand("residual", "residual of d^s h_T against its stage "
                                                    "target");
    resid.refs = add_common(resc, resid.common);
    resc->add_option("--plan", resid.plan_path, "plan JSON file")->required();
    resid.opt_k = resc->add_option("--k", resid.k, "stage (default 1)");
    resc->add_option("--n", resid.n, "block index")->required();
    resid.opt_s =
        resc->add_option("--s", resid.s, "derivative order (default: first admitted order of n)");
    resid.opt_r = resc->add_option("--r", resid.r, "radius (rational, default 4/5)");
    resid.opt_nmax = resc->add_option("--n-max", resid.n_max, "truncation (default n+2)");

    GrowthArgs gr;
    CLI::App* groc = app.add_subcommand("growth", "L2 growth profile of the truncated sum");
    gr.refs = add_common(groc, gr.common);
    groc->add_option("--plan", gr.plan_path, "plan JSON file")->required();
    groc->add_option("--C", gr.C, "envelope constant (default: the plan's C)");
    groc->add_option("--n-max", gr.n_max, "truncation")->required();
    gr.opt_rlo = groc->add_option("--r-lo", gr.r_lo, "grid start (default 1/2)");
    gr.opt_rhi = groc->add_option("--r-hi", gr.r_hi, "grid end (default 50)");
    gr.opt_rpts = groc->add_option("--r-points", gr.r_points, "grid size (default 50)");
    groc->add_option("--exact-checks", gr.exact_checks,
                     "number of exact rational cross-checks (default 5)");

    LemmaArgs lem;
    CLI::App* lemc = app.add_subcommand("lemmas", "battery over the supporting lemmas");
    lem.refs = add_common(lemc, lem.common);
    lemc->add_option("--N", lem.N, "dimension (default 3)");
    lemc->add_option("--samples", lem.samples, "sphere samples for the Poisson check");
    lemc->add_option("--r-points", lem.r_points, "radii per growth-lemma scan (default 12)");

    SelftestArgs st;
    CLI::App* stc = app.add_subcommand("selftest", "end-to-end smoke battery");
    st.refs = add_common(stc, st.common);
    stc->add_option("--k-max", st.k_max, "stages to exercise (default 1; 0 = empty plan)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto finish = [](CommonOpts& c, const OptRefs& r) {
            const nlohmann::json j = load_config(c.config);
            apply_common_config(j, r, c);
            require_precision(c.precision);
            return j;
        };
        if (axial->parsed()) { finish(ax.common, ax.refs); return run_axial(ax); }
        if (decomp->parsed()) { finish(dec.common, dec.refs); return run_decompose(dec); }
        if (primc->parsed()) { finish(prim.common, prim.refs); return run_primitive(prim); }
        if (planc->parsed()) { auto j = finish(pl.common, pl.refs); return run_plan(pl, j); }
        if (denc->parsed()) { auto j = finish(den.common, den.refs); return run_density(den, j); }
        if (resc->parsed()) { auto j = finish(resid.common, resid.refs); return run_residual(resid, j); }
        if (groc->parsed()) { auto j = finish(gr.common, gr.refs); return run_growth(gr, j); }
        if (lemc->parsed()) { finish(lem.common, lem.refs); return run_lemmas(lem); }
        if (stc->parsed()) { finish(st.common, st.refs); return run_selftest(st); }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
