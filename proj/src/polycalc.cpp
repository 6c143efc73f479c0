#include "fhharm/polycalc.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace fhharm {

namespace {

void require_same_dim(const Polynomial& a, const Polynomial& b, const char* what) {
    if (a.nvars() != b.nvars()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.nvars()) + " vs " + std::to_string(b.nvars()) + ")");
    }
}

}  // namespace

Polynomial Polynomial::constant(unsigned nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial::unit(nvars), c);
    return p;
}

Polynomial Polynomial::variable(unsigned nvars, unsigned axis) {
    if (axis == 0 || axis > nvars) throw std::invalid_argument("variable axis out of range");
    Monomial m = Monomial::unit(nvars);
    m.e[axis - 1] = 1;
    Polynomial p(nvars);
    p.add_term(m, Rational(1));
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (m.e.size() != nvars_) throw std::invalid_argument("monomial dimension mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    require_same_dim(*this, o, "operator+=");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    require_same_dim(*this, o, "operator-=");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_same_dim(a, b, "operator*");
    Polynomial r(a.nvars());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            Monomial m = ma;
            for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] += mb.e[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
    Polynomial r(p.nvars());
    if (c == 0) return r;
    for (const auto& [m, pc] : p.terms()) r.add_term(m, c * pc);
    return r;
}

Polynomial differentiate(const Polynomial& p, unsigned axis, unsigned order) {
    if (axis == 0 || axis > p.nvars()) throw std::invalid_argument("differentiate: axis out of range");
    if (order == 0) return p;
    Polynomial r(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        uint32_t a = m.e[axis - 1];
        if (a < order) continue;
        // c * a(a-1)...(a-order+1), exactly
        Rational nc = c * Rational(factorial_gap(a - order, a));
        Monomial dm = m;
        dm.e[axis - 1] = a - order;
        r.add_term(dm, nc);
    }
    return r;
}

Polynomial laplacian(const Polynomial& p) {
    Polynomial r(p.nvars());
    for (unsigned axis = 1; axis <= p.nvars(); ++axis) r += differentiate(p, axis, 2);
    return r;
}

Rational evaluate(const Polynomial& p, const std::vector<Rational>& x) {
    if (x.size() != p.nvars()) throw std::invalid_argument("evaluate: point dimension mismatch");
    Rational acc(0);
    for (const auto& [m, c] : p.terms()) {
        Rational t = c;
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i]) t *= pow_rational(x[i], m.e[i]);
        }
        acc += t;
    }
    return acc;
}

double evaluate_d(const Polynomial& p, const std::vector<double>& x) {
    if (x.size() != p.nvars()) throw std::invalid_argument("evaluate_d: point dimension mismatch");
    double acc = 0.0;
    for (const auto& [m, c] : p.terms()) {
        double t = c.get_d();
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            for (uint32_t k = 0; k < m.e[i]; ++k) t *= x[i];
        }
        acc += t;
    }
    return acc;
}

std::vector<std::pair<unsigned, Polynomial>> graded_parts(const Polynomial& p) {
    std::map<unsigned, Polynomial> by_deg;
    for (const auto& [m, c] : p.terms()) {
        auto [it, inserted] = by_deg.emplace(m.degree(), Polynomial(p.nvars()));
        it->second.add_term(m, c);
    }
    std::vector<std::pair<unsigned, Polynomial>> out;
    out.reserve(by_deg.size());
    for (auto& [d, q] : by_deg) out.emplace_back(d, std::move(q));
    return out;
}

HomogeneousHarmonic::HomogeneousHarmonic(unsigned deg, Polynomial p) : degree(deg), poly(std::move(p)) {
    for (const auto& [m, c] : poly.terms()) {
        if (m.degree() != degree) {
            throw std::domain_error("HomogeneousHarmonic: polynomial not homogeneous of degree " +
                                    std::to_string(degree));
        }
    }
    if (!laplacian(poly).is_zero()) {
        throw std::domain_error("HomogeneousHarmonic: polynomial of degree " + std::to_string(degree) +
                                " is not harmonic");
    }
}

std::vector<HomogeneousHarmonic> homogeneous_components(const Polynomial& p) {
    std::vector<HomogeneousHarmonic> out;
    std::vector<unsigned> bad;
    for (auto& [d, part] : graded_parts(p)) {
        if (laplacian(part).is_zero()) {
            out.emplace_back(d, std::move(part), HomogeneousHarmonic::unchecked_t{});
        } else {
            bad.push_back(d);
        }
    }
    if (!bad.empty()) {
        std::string msg = "homogeneous_components: input not harmonic; failing degree(s):";
        for (unsigned d : bad) msg += " " + std::to_string(d);
        throw std::domain_error(msg);
    }
    return out;
}

// ---- text form ------------------------------------------------------------

std::string to_text(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    // highest term first
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const Monomial& m = it->first;
        const Rational& c = it->second;
        Rational magnitude = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out += "-";
            first = false;
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        out += rat_to_string(magnitude);
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            out += " * x" + std::to_string(i + 1);
            if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
        }
    }
    return out;
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    unsigned nvars;

    explicit Parser(const std::string& text, unsigned nv) : s(text), nvars(nv) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("parse_polynomial: " + why + " at position " + std::to_string(pos));
    }

    // integer or p/q
    Rational rational() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected number");
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected denominator");
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        return rat_from_string(s.substr(start, pos - start));
    }

    // x<i> or x<i>^<a>
    std::pair<unsigned, uint32_t> var_power() {
        skip_ws();
        if (peek() != 'x') fail("expected variable");
        ++pos;
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected variable index");
        unsigned idx = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            idx = idx * 10 + static_cast<unsigned>(s[pos] - '0');
            ++pos;
        }
        if (idx == 0 || idx > nvars) fail("variable index out of range [1," + std::to_string(nvars) + "]");
        uint32_t a = 1;
        skip_ws();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            skip_ws();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected exponent");
            a = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                a = a * 10 + static_cast<uint32_t>(s[pos] - '0');
                ++pos;
            }
        }
        return {idx, a};
    }

    // [sign consumed by caller] factor ('*' factor)* where factors are one
    // optional leading rational and any number of variable powers.
    void term(Polynomial& acc, bool negate) {
        Rational c(1);
        Monomial m = Monomial::unit(nvars);
        bool expect_factor = true;
        bool saw_coeff = false;
        while (expect_factor) {
            char ch = peek();
            if (ch == 'x') {
                auto [idx, a] = var_power();
                m.e[idx - 1] += a;
            } else if (!saw_coeff && (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+')) {
                c = rational();
                saw_coeff = true;
            } else {
                fail("expected term factor");
            }
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
            } else {
                expect_factor = false;
            }
        }
        acc.add_term(m, negate ? Rational(-c) : c);
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, unsigned nvars) {
    Parser ps(text, nvars);
    Polynomial acc(nvars);
    if (ps.eof()) ps.fail("empty input");
    // Special-case a bare "0"
    {
        std::size_t save = ps.pos;
        ps.skip_ws();
        if (ps.pos < ps.s.size() && ps.s[ps.pos] == '0') {
            std::size_t z = ps.pos + 1;
            while (z < ps.s.size() && std::isspace(static_cast<unsigned char>(ps.s[z]))) ++z;
            if (z >= ps.s.size()) return acc;
        }
        ps.pos = save;
    }
    bool negate = false;
    char c = ps.peek();
    if (c == '-') {
        negate = true;
        ++ps.pos;
    } else if (c == '+') {
        ++ps.pos;
    }
    ps.term(acc, negate);
    while (!ps.eof()) {
        char op = ps.peek();
        if (op != '+' && op != '-') ps.fail("expected '+' or '-' between terms");
        ++ps.pos;
        ps.term(acc, op == '-');
    }
    return acc;
}

}  // namespace fhharm
