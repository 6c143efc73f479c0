#include "fhharm/construct.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace fhharm {

namespace {

Int ceil_rational(const Rational& q) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return c;
}

unsigned long two_adic_valuation(unsigned long n) {
    unsigned long k = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++k;
    }
    return k;
}

constexpr unsigned long kEllCap = 1000000000UL;       // 10^9
constexpr unsigned long kBlockIndexCap = 3000000000UL;  // keeps n^2 inside 64 bits

}  // namespace

PlanEntryView DensePlan::entry(unsigned long k) const {
    if (k == 0) throw std::invalid_argument("plan entry index is 1-based");
    if (generators.empty()) throw std::invalid_argument("plan has no generators");
    PlanEntryView e;
    e.k = k;
    e.F = &generators[(k - 1) % generators.size()];
    e.m = e.F->m;
    e.norm2 = e.F->norm2;
    if (e.m >= growth.size()) throw std::logic_error("plan is missing a growth constant");
    e.c_squared = growth[e.m].c_squared;
    e.c_upper = growth[e.m].c_upper;
    return e;
}

// ---- dense sequence ---------------------------------------------------------

namespace {

struct ComboEnumerator {
    const std::vector<HomogeneousHarmonic>& basis;
    unsigned height;
    std::vector<long> v;
    std::vector<Polynomial>* out = nullptr;
    unsigned nvars;
    unsigned long q = 1;

    void emit() {
        Int content(0);
        for (long c : v) {
            if (c != 0) mpz_gcd_ui(content.get_mpz_t(), content.get_mpz_t(), c < 0 ? -c : c);
        }
        if (mpz_gcd_ui(nullptr, content.get_mpz_t(), q) != 1) return;  // v/q not in lowest terms
        Polynomial p(nvars);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0) p += rat(v[i], static_cast<long>(q)) * basis[i].poly;
        }
        out->push_back(p);
        out->push_back(-p);
    }

    void dfs(std::size_t pos, unsigned remaining, bool any) {
        if (pos == v.size()) {
            if (remaining == 0 && any) emit();
            return;
        }
        for (unsigned a = remaining; a > 0; --a) {
            v[pos] = static_cast<long>(a);
            dfs(pos + 1, remaining - a, true);
            if (any) {
                v[pos] = -static_cast<long>(a);
                dfs(pos + 1, remaining - a, true);
            }
        }
        v[pos] = 0;
        dfs(pos + 1, remaining, any);
    }
};

}  // namespace

DensePlan default_dense_sequence(unsigned N, unsigned coefficient_height, unsigned degree_cap) {
    if (N < 2) throw std::invalid_argument("default_dense_sequence: N must be >= 2");
    if (coefficient_height < 1 || degree_cap < 1) {
        throw std::invalid_argument("default_dense_sequence: bounds must be >= 1");
    }
    DensePlan plan;
    plan.N = N;
    plan.coefficient_height = coefficient_height;
    plan.degree_cap = degree_cap;

    std::vector<HomogeneousHarmonic> basis;
    for (unsigned d = 0; d <= degree_cap; ++d) {
        std::vector<HomogeneousHarmonic> layer = harmonic_basis(d, N);
        basis.insert(basis.end(), std::make_move_iterator(layer.begin()),
                     std::make_move_iterator(layer.end()));
    }

    std::vector<Polynomial> gens;
    ComboEnumerator en{basis, coefficient_height, std::vector<long>(basis.size(), 0), &gens, N};
    for (unsigned w = 1; w <= coefficient_height; ++w) {
        for (unsigned long q = 1; q <= coefficient_height; ++q) {
            en.q = q;
            en.dfs(0, w, false);
        }
    }

    plan.generators.reserve(gens.size());
    for (const Polynomial& g : gens) plan.generators.push_back(decompose_poly(g));
    plan.growth = growth_constants_upto(degree_cap, N, 1000000UL);
    return plan;
}

// ---- ell selection ----------------------------------------------------------

unsigned long EllSequence::at(unsigned long k) const {
    if (k < 1 || k > ell.size()) throw std::invalid_argument("ell index out of range");
    return ell[k - 1];
}

EllSequence select_ell(const DensePlan& plan, const Rational& C, unsigned long k_max) {
    if (C <= 0) throw std::invalid_argument("select_ell: C must be positive");
    if (plan.c_prime <= 0) throw std::invalid_argument("select_ell: plan C' must be positive");
    EllSequence seq;
    seq.C = C;
    seq.c_prime = plan.c_prime;
    Rational budget = C * C / plan.c_prime;  // sum over k of per-k budgets (budget * 2^-k)
    unsigned long prev = 0;
    for (unsigned long k = 1; k <= k_max; ++k) {
        PlanEntryView e = plan.entry(k);
        Rational two_k = Rational(Int(1) << k);
        Rational growth_rule = Rational(2 * e.m) + e.c_upper * two_k * (e.norm2 + 1);
        Rational budget_rule = e.c_upper * e.norm2 * two_k / budget;
        Int lo = ceil_rational(growth_rule > budget_rule ? growth_rule : budget_rule);
        if (lo < 1) lo = 1;
        if (lo <= Int(prev)) lo = prev + 1;
        if (lo % 2 == 0) lo += 1;
        if (lo > Int(kEllCap)) {
            throw std::domain_error("select_ell: l_" + std::to_string(k) +
                                    " exceeds 10^9; C' too large or C too small for this plan");
        }
        prev = lo.get_ui();
        seq.ell.push_back(prev);
    }
    return seq;
}

// ---- index families ---------------------------------------------------------

std::vector<unsigned long> index_set_A(unsigned long k, const EllSequence& ell, unsigned long limit) {
    unsigned long lk = ell.at(k);
    Int step = Int(lk) << k;
    std::vector<unsigned long> out;
    for (Int n = step; n <= limit; n += 2 * step) out.push_back(n.get_ui());
    return out;
}

namespace {

// Owner test: n in A_k iff k = v2(n) <= k_max and l_k | n / 2^k (the odd
// part), in which case n = (2m-1) l_k 2^k with 2m-1 = n / (l_k 2^k).
bool owner_of(unsigned long n, const EllSequence& ell, unsigned long& k, unsigned long& m) {
    if (n == 0 || n % 2 != 0) return false;
    k = two_adic_valuation(n);
    if (k > ell.k_max()) return false;
    unsigned long odd = n >> k;
    unsigned long lk = ell.at(k);
    if (odd % lk != 0) return false;
    m = (odd / lk + 1) / 2;
    return true;
}

}  // namespace

std::vector<unsigned long> index_set_B(unsigned long n, unsigned long k, const EllSequence& ell,
                                       const Scale& scale) {
    unsigned long owner = 0, m = 0;
    if (!owner_of(n, ell, owner, m) || owner != k) {
        throw std::invalid_argument("index_set_B: n is not in A_k");
    }
    unsigned long lk = ell.at(k);
    if (n < scale.threshold(lk)) {
        throw std::invalid_argument("index_set_B: n is below the admission threshold");
    }
    if (n > kBlockIndexCap) throw std::domain_error("index_set_B: block index too large");
    unsigned long count = n / lk;  // (2m-1) 2^k
    std::vector<unsigned long> out;
    out.reserve(count);
    for (unsigned long j = 1; j <= count; ++j) out.push_back(n * n + j * lk);
    return out;
}

// ---- blocks -----------------------------------------------------------------

std::vector<PrimitiveTerm> BlockQ::terms() const {
    std::vector<PrimitiveTerm> ts;
    ts.reserve(orders.size());
    for (unsigned long o : orders) ts.push_back(PrimitiveTerm{o, base});
    return ts;
}

BlockQ block_Q(unsigned long n, const DensePlan& plan, const EllSequence& ell, const Scale& scale) {
    BlockQ b;
    b.n = n;
    unsigned long k = 0, m = 0;
    if (!owner_of(n, ell, k, m)) return b;
    unsigned long lk = ell.at(k);
    if (n < scale.threshold(lk)) return b;
    if (n > kBlockIndexCap) throw std::domain_error("block_Q: block index too large");
    PlanEntryView e = plan.entry(k);
    b.k = k;
    b.m = m;
    b.base = e.F;
    unsigned long count = n / lk;
    b.orders.reserve(count);
    for (unsigned long j = 1; j <= count; ++j) b.orders.push_back(n * n + j * lk);
    b.deg_lo = n * n;
    b.deg_hi = n * n + n + e.m;
    return b;
}

DegreeInterval degree_interval(unsigned long n, const DensePlan& plan, const EllSequence& ell,
                               const Scale& scale) {
    BlockQ b = block_Q(n, plan, ell, scale);
    if (b.zero()) throw std::invalid_argument("degree_interval: Q_n is the zero block");
    return DegreeInterval{b.deg_lo, b.deg_hi};
}

// ---- truncated assembly -----------------------------------------------------

TruncatedH assemble_truncated(const DensePlan& plan, const EllSequence& ell, unsigned long n_max,
                              const Scale& scale) {
    TruncatedH h;
    h.plan = &plan;
    h.ell = &ell;
    h.scale = scale;
    h.n_max = n_max;
    for (unsigned long k = 1; k <= ell.k_max(); ++k) {
        for (unsigned long n : index_set_A(k, ell, n_max)) {
            if (n < scale.threshold(ell.at(k))) continue;
            h.blocks.push_back(block_Q(n, plan, ell, scale));
        }
    }
    std::sort(h.blocks.begin(), h.blocks.end(),
              [](const BlockQ& a, const BlockQ& b) { return a.n < b.n; });
    for (std::size_t i = 1; i < h.blocks.size(); ++i) {
        if (h.blocks[i - 1].deg_hi >= h.blocks[i].deg_lo) {
            throw std::domain_error(
                "assemble_truncated: degree intervals of blocks n=" +
                std::to_string(h.blocks[i - 1].n) + " and n=" + std::to_string(h.blocks[i].n) +
                " overlap; the ell sequence violates the growth rule");
        }
    }
    return h;
}

Rational TruncatedH::norm2(const Rational& r) const {
    Rational acc(0);
    for (const BlockQ& b : blocks) {
        for (unsigned long o : b.orders) acc += block_norm_squared(PrimitiveTerm{o, b.base}, r);
    }
    return acc;
}

BigFloat TruncatedH::norm2_f(const BigFloat& r) const {
    BigFloat acc;
    for (const BlockQ& b : blocks) {
        for (unsigned long o : b.orders) acc += block_norm_squared_f(PrimitiveTerm{o, b.base}, r);
    }
    return acc;
}

// ---- relaxed-scale expansion oracles -----------------------------------------

namespace {
constexpr unsigned long kExpansionDegreeCap = 64;
}

Polynomial expand_primitive_term(const PrimitiveTerm& t) {
    if (t.base == nullptr) throw std::invalid_argument("expand_primitive_term: missing base");
    if (t.n + t.base->m > kExpansionDegreeCap) {
        throw std::domain_error("expand_primitive_term: degree too large to expand (relaxed scale only)");
    }
    Polynomial acc(t.base->N);
    for (const HomogeneousHarmonic& comp : homogeneous_components(t.base->F)) {
        acc += primitive(comp, static_cast<unsigned>(t.n)).poly;
    }
    return acc;
}

Polynomial expand_block(const BlockQ& q) {
    if (q.zero()) throw std::invalid_argument("expand_block: zero block");
    Polynomial acc(q.base->N);
    for (unsigned long o : q.orders) acc += expand_primitive_term(PrimitiveTerm{o, q.base});
    return acc;
}

Polynomial expand_truncated(const TruncatedH& h) {
    Polynomial acc(h.plan->N);
    for (const BlockQ& b : h.blocks) acc += expand_block(b);
    return acc;
}

// ---- plan files -------------------------------------------------------------

std::string plan_to_json(const DensePlan& plan, const EllSequence& ell, bool pretty) {
    nlohmann::json j;
    j["format"] = "fhharm-plan-1";
    j["N"] = plan.N;
    j["coefficient_height"] = plan.coefficient_height;
    j["degree_cap"] = plan.degree_cap;
    j["C"] = rat_to_string(ell.C);
    j["c_prime"] = rat_to_string(plan.c_prime);
    j["c_prime_provenance"] = plan.c_prime_provenance;
    nlohmann::json gens = nlohmann::json::array();
    for (const DecomposedPoly& g : plan.generators) gens.push_back(to_text(g.F));
    j["generators"] = gens;
    j["ell"] = ell.ell;
    nlohmann::json entries = nlohmann::json::array();
    for (unsigned long k = 1; k <= ell.k_max(); ++k) {
        PlanEntryView e = plan.entry(k);
        entries.push_back({{"k", k},
                           {"generator", (k - 1) % plan.cycle()},
                           {"F", to_text(e.F->F)},
                           {"m", e.m},
                           {"ell", ell.at(k)},
                           {"c_squared", rat_to_string(e.c_squared)},
                           {"c_upper", rat_to_string(e.c_upper)},
                           {"norm2", rat_to_string(e.norm2)}});
    }
    j["entries"] = entries;
    return pretty ? j.dump(2) : j.dump();
}

std::pair<DensePlan, EllSequence> plan_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "fhharm-plan-1") {
        throw std::invalid_argument("plan_from_json: unknown format");
    }
    DensePlan plan;
    plan.N = j.at("N").get<unsigned>();
    plan.coefficient_height = j.at("coefficient_height").get<unsigned>();
    plan.degree_cap = j.at("degree_cap").get<unsigned>();
    plan.c_prime = rat_from_string(j.at("c_prime").get<std::string>());
    if (plan.c_prime <= 0) throw std::invalid_argument("plan_from_json: C' must be positive");
    plan.c_prime_provenance = j.at("c_prime_provenance").get<std::string>();
    for (const auto& g : j.at("generators")) {
        plan.generators.push_back(decompose_poly(parse_polynomial(g.get<std::string>(), plan.N)));
        if (plan.generators.back().m > plan.degree_cap) {
            throw std::invalid_argument("plan_from_json: generator degree exceeds degree_cap");
        }
    }
    plan.growth = growth_constants_upto(plan.degree_cap, plan.N, 1000000UL);

    EllSequence ell;
    ell.C = rat_from_string(j.at("C").get<std::string>());
    if (ell.C <= 0) throw std::invalid_argument("plan_from_json: C must be positive");
    ell.c_prime = plan.c_prime;
    for (const auto& l : j.at("ell")) ell.ell.push_back(l.get<unsigned long>());

    // Re-derive everything and validate the stored metadata against it.
    Rational budget = ell.C * ell.C / plan.c_prime;
    unsigned long prev = 0;
    const auto& entries = j.at("entries");
    if (entries.size() != ell.ell.size()) {
        throw std::invalid_argument("plan_from_json: entry/ell length mismatch");
    }
    for (unsigned long k = 1; k <= ell.k_max(); ++k) {
        const auto& item = entries[k - 1];
        PlanEntryView e = plan.entry(k);
        unsigned long lk = ell.at(k);
        bool ok = item.at("k").get<unsigned long>() == k &&
                  item.at("generator").get<std::size_t>() == (k - 1) % plan.cycle() &&
                  parse_polynomial(item.at("F").get<std::string>(), plan.N) == e.F->F &&
                  item.at("m").get<unsigned>() == e.m &&
                  item.at("ell").get<unsigned long>() == lk &&
                  rat_from_string(item.at("c_squared").get<std::string>()) == e.c_squared &&
                  rat_from_string(item.at("c_upper").get<std::string>()) == e.c_upper &&
                  rat_from_string(item.at("norm2").get<std::string>()) == e.norm2;
        if (!ok) {
            throw std::invalid_argument("plan_from_json: stored entry disagrees with recomputation at k=" +
                                        std::to_string(k));
        }
        Rational two_k = Rational(Int(1) << k);
        Rational growth_rule = Rational(2 * e.m) + e.c_upper * two_k * (e.norm2 + 1);
        Rational budget_rule = e.c_upper * e.norm2 * two_k / budget;
        if (lk % 2 == 0 || lk <= prev || Rational(static_cast<long>(lk)) < growth_rule ||
            Rational(static_cast<long>(lk)) < budget_rule) {
            throw std::invalid_argument("plan_from_json: ell sequence violates the growth rule at k=" +
                                        std::to_string(k));
        }
        prev = lk;
    }
    return {std::move(plan), std::move(ell)};
}

}  // namespace fhharm
