/*
 * test_kuran.cpp -- harmonic dimensions, axial harmonics, the x1-graded
 * decomposition, canonical primitives with their sharp norm constants,
 * and the block-norm calculus against expand-then-integrate oracles.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "fhharm/kuran.hpp"
#include "fhharm/spheremeans.hpp"

using namespace fhharm;

namespace {

Polynomial var(unsigned nvars, unsigned axis) { return Polynomial::variable(nvars, axis); }

}  // namespace

TEST_CASE("harmonic dimensions: frozen values and monotonicity") {
    // d_{m,3} = 2m+1
    for (unsigned long m = 0; m <= 10; ++m) CHECK(dim_harmonic(m, 3) == Int(2 * m + 1));
    // d_{m,2} = 2 for m >= 1, d_{0,2} = 1
    CHECK(dim_harmonic(0, 2) == 1);
    for (unsigned long m = 1; m <= 6; ++m) CHECK(dim_harmonic(m, 2) == 2);
    // N = 1: only constants and multiples of x survive
    CHECK(dim_harmonic(0, 1) == 1);
    CHECK(dim_harmonic(1, 1) == 1);
    CHECK(dim_harmonic(2, 1) == 0);
    CHECK(dim_harmonic(5, 1) == 0);
    // spot values
    CHECK(dim_harmonic(2, 4) == 9);
    CHECK(dim_harmonic(4, 4) == 25);
    CHECK(dim_harmonic(6, 5) == 140);

    // nondecreasing in m for N >= 2, increasing in N for m >= 1
    for (unsigned N = 2; N <= 8; ++N) {
        for (unsigned long m = 0; m < 40; ++m) {
            CHECK(dim_harmonic(m + 1, N) >= dim_harmonic(m, N));
        }
    }
    for (unsigned N = 2; N <= 9; ++N) {
        for (unsigned long m = 1; m <= 12; ++m) {
            CHECK(dim_harmonic(m, N + 1) > dim_harmonic(m, N));
        }
    }
}

TEST_CASE("axial coefficients: frozen recurrences") {
    CHECK(axial_coefficients(0, 3) == std::vector<Rational>{rat(1)});
    CHECK(axial_coefficients(1, 3) == std::vector<Rational>{rat(1)});
    CHECK(axial_coefficients(2, 3) == std::vector<Rational>{rat(1), rat(-1, 2)});
    CHECK(axial_coefficients(3, 3) == std::vector<Rational>{rat(1), rat(-3, 2)});
    CHECK(axial_coefficients(4, 3) == std::vector<Rational>{rat(1), rat(-3), rat(3, 8)});
    CHECK(axial_coefficients(2, 2) == std::vector<Rational>{rat(1), rat(-1)});
    CHECK(axial_coefficients(2, 5) == std::vector<Rational>{rat(1), rat(-1, 4)});
}

TEST_CASE("axial harmonics: harmonicity, normalization, norm, derivative") {
    CHECK(to_text(axial_harmonic(2, 3).h.poly) == "1 * x1^2 - 1/2 * x2^2 - 1/2 * x3^2");

    for (unsigned N = 2; N <= 6; ++N) {
        for (unsigned m = 0; m <= 8; ++m) {
            AxialHarmonic a = axial_harmonic(m, N);
            CHECK(a.m == m);
            CHECK(a.N == N);
            CHECK(a.h.degree == m);
            CHECK(laplacian(a.h.poly).is_zero());

            // I(1, 0, ..., 0) = 1
            std::vector<Rational> e1(N, rat(0));
            e1[0] = rat(1);
            CHECK(evaluate(a.h.poly, e1) == rat(1));
        }
    }

    // M2^2(I_{m,N}, r) = r^(2m) / d_{m,N}
    for (unsigned N = 2; N <= 5; ++N) {
        for (unsigned m = 0; m <= 5; ++m) {
            AxialHarmonic a = axial_harmonic(m, N);
            Rational d(dim_harmonic(m, N));
            CHECK(m2_mean_squared(a.h.poly, rat(1)) == 1 / d);
            CHECK(m2_mean_squared(a.h.poly, rat(3, 2)) == pow_rational(rat(3, 2), 2 * m) / d);
        }
    }

    // d/dx1 I_m = m I_{m-1}
    for (unsigned N = 2; N <= 5; ++N) {
        for (unsigned m = 1; m <= 6; ++m) {
            CHECK(differentiate(axial_harmonic(m, N).h.poly, 1) ==
                  rat(m) * axial_harmonic(m - 1, N).h.poly);
        }
    }
}

TEST_CASE("restricted axial harmonics") {
    // p = 0 restriction is the axial harmonic itself
    CHECK(restrict_axial(3, 3, 0) == axial_harmonic(3, 3).h.poly);
    // I*_{2,5} on R^3: x1^2 - (x2^2+x3^2)/4; harmonic only as a 5-var object
    Polynomial x = var(3, 1), y = var(3, 2), z = var(3, 3);
    Polynomial expect = x * x - rat(1, 4) * (y * y) - rat(1, 4) * (z * z);
    CHECK(restrict_axial(2, 3, 1) == expect);
    CHECK_FALSE(laplacian(restrict_axial(2, 3, 1)).is_zero());
    CHECK(restrict_axial(0, 3, 2) == Polynomial::constant(3, rat(1)));
}

TEST_CASE("Kuran decomposition: frozen small cases") {
    // x1 x2 in R^3 = u_1 * I*_{1,5} with u_1 = x2
    Polynomial x = var(3, 1), y = var(3, 2), z = var(3, 3);
    KuranDecomposition d = kuran_decompose(x * y);
    REQUIRE(d.parts.size() == 3);
    CHECK(d.parts[0].is_zero());
    CHECK(d.parts[1] == y);
    CHECK(d.parts[2].is_zero());

    // an x1-free harmonic is entirely its own top part
    KuranDecomposition d2 = kuran_decompose(y * y - z * z);
    CHECK(d2.parts[0].is_zero());
    CHECK(d2.parts[1].is_zero());
    CHECK(d2.parts[2] == y * y - z * z);

    // the axial harmonic is entirely the p = 0 part
    KuranDecomposition d3 = kuran_decompose(axial_harmonic(3, 3).h);
    CHECK(d3.parts[0] == Polynomial::constant(3, rat(1)));
    for (unsigned p = 1; p <= 3; ++p) CHECK(d3.parts[p].is_zero());

    CHECK_THROWS_AS(kuran_decompose(x * x), std::domain_error);
}

TEST_CASE("Kuran decomposition: recombination, x1-freeness, norm identity") {
    for (unsigned N = 2; N <= 4; ++N) {
        for (unsigned m = 0; m <= 4; ++m) {
            for (const HomogeneousHarmonic& H : harmonic_basis(m, N)) {
                KuranDecomposition dec = kuran_decompose(H);
                REQUIRE(dec.parts.size() == m + 1);
                CHECK(kuran_recombine(dec) == H.poly);
                for (unsigned p = 0; p <= m; ++p) {
                    const Polynomial& u = dec.parts[p];
                    if (u.is_zero()) continue;
                    // u_p never touches x1
                    for (const auto& [mon, c] : u.terms()) CHECK(mon.e[0] == 0);
                    // d_{m-p, N+2p} M2^2(u_p I*, 1) = M2^2(u_p, 1)
                    Polynomial part = u * restrict_axial(m - p, N, p);
                    CHECK(Rational(dim_harmonic(m - p, N + 2 * p)) *
                              m2_mean_squared(part, rat(1)) ==
                          m2_mean_squared(u, rat(1)));
                }
            }
        }
    }

    // hand value: H = x1 (x2^2 - x3^2) has u_2 = x2^2 - x3^2 and
    // 7 * M2^2(u_2 I*_{1,7}, 1) = M2^2(u_2, 1) = 4/15
    Polynomial x = var(3, 1), y = var(3, 2), z = var(3, 3);
    Polynomial H = x * (y * y - z * z);
    CHECK(m2_mean_squared(H, rat(1)) == rat(4, 105));
    KuranDecomposition dec = kuran_decompose(H);
    CHECK(dec.parts[2] == y * y - z * z);
    CHECK(m2_mean_squared(dec.parts[2], rat(1)) == rat(4, 15));
}

TEST_CASE("Kuran JSON round trip") {
    Polynomial x = var(3, 1), y = var(3, 2);
    KuranDecomposition dec = kuran_decompose(x * y);
    std::string text = kuran_to_json(dec);
    KuranDecomposition back = kuran_from_json(text);
    CHECK(back.m == dec.m);
    CHECK(back.N == dec.N);
    REQUIRE(back.parts.size() == dec.parts.size());
    for (std::size_t p = 0; p < dec.parts.size(); ++p) CHECK(back.parts[p] == dec.parts[p]);
    CHECK(kuran_to_json(back) == text);                 // deterministic
    CHECK(kuran_to_json(dec, true) != text);            // pretty differs textually
    CHECK_THROWS_AS(kuran_from_json("{"), std::exception);
}

TEST_CASE("primitives: frozen cases and the defining identities") {
    HomogeneousHarmonic one(0, Polynomial::constant(3, rat(1)));
    CHECK(primitive(one, 1).poly == var(3, 1));

    HomogeneousHarmonic x1(1, var(3, 1));
    CHECK(primitive(x1, 1).poly == rat(1, 2) * axial_harmonic(2, 3).h.poly);

    for (unsigned N = 3; N <= 4; ++N) {
        for (unsigned m = 0; m <= 3; ++m) {
            for (const HomogeneousHarmonic& H : harmonic_basis(m, N)) {
                for (unsigned k = 0; k <= 3; ++k) {
                    HomogeneousHarmonic P = primitive(H, k);
                    CHECK(P.degree == m + k);
                    CHECK(differentiate(P.poly, 1, k) == H.poly);
                    for (unsigned l = 0; l + k <= 4; ++l) {
                        CHECK(primitive(P, l).poly == primitive(H, k + l).poly);
                    }
                }
            }
        }
    }
}

TEST_CASE("primitive bound constants: frozen, sharp at m = 0, valid in general") {
    for (unsigned m = 0; m <= 4; ++m) {
        CHECK(primitive_bound_constant(0, m, 3) == 1);
        CHECK(primitive_bound_constant(0, m, 5) == 1);
    }
    for (unsigned k = 0; k <= 10; ++k) {
        Rational expect = rat(1) / (Rational(factorial(k)) * Rational(factorial(k)) * (2 * k + 1));
        CHECK(primitive_bound_constant(k, 0, 3) == expect);
    }
    CHECK(primitive_bound_constant(1, 1, 3) == rat(1, 5));

    // sharpness at m = 0: M2^2(P_k(1), 1) = c_{k,0,N}, via symbolic expansion
    for (unsigned N = 3; N <= 5; ++N) {
        HomogeneousHarmonic one(0, Polynomial::constant(N, rat(1)));
        for (unsigned k = 0; k <= 6; ++k) {
            CHECK(m2_mean_squared(primitive(one, k).poly, rat(1)) ==
                  primitive_bound_constant(k, 0, N));
        }
    }

    // validity: M2^2(P_k(H), 1) <= c_{k,m,N} M2^2(H, 1) on whole basis layers
    for (unsigned N = 3; N <= 4; ++N) {
        for (unsigned m = 0; m <= 3; ++m) {
            for (const HomogeneousHarmonic& H : harmonic_basis(m, N)) {
                Rational h2 = m2_mean_squared(H.poly, rat(1));
                for (unsigned k = 1; k <= 5; ++k) {
                    CHECK(m2_mean_squared(primitive(H, k).poly, rat(1)) <=
                          primitive_bound_constant(k, m, N) * h2);
                }
            }
        }
    }
}

TEST_CASE("growth constants: frozen values and structure") {
    CHECK(growth_constant(0, 2, 1000000UL).c_squared == 1);
    CHECK(growth_constant(0, 3, 1000000UL).c_squared == 1);
    CHECK(growth_constant(1, 3, 1000000UL).c_squared == 3);
    CHECK(growth_constant(2, 3, 1000000UL).c_squared == 60);

    for (unsigned N = 2; N <= 5; ++N) {
        for (unsigned m = 0; m <= 3; ++m) {
            GrowthConstant g = growth_constant(m, N, 1000000UL);
            CHECK(g.m == m);
            CHECK(g.N == N);
            CHECK(g.c_squared >= 1);  // A_0 = c_{0,m,N} (m!)^2 (m+1)^(N-2) >= 1
            CHECK(g.c_upper * g.c_upper >= g.c_squared);  // certified dyadic upper bound
            CHECK(g.c_upper > 0);
        }
    }

    auto seq = growth_constants_upto(4, 3, 1000000UL);
    REQUIRE(seq.size() == 5);
    for (unsigned m = 0; m + 1 < seq.size(); ++m) {
        CHECK(seq[m + 1].c_squared >= seq[m].c_squared);  // cumulative max
    }
    CHECK(seq[1].c_squared == 3);
    CHECK(seq[2].c_squared == 60);

    CHECK_THROWS_AS(growth_constant(2, 3, 1), std::exception);  // window larger than k_max
}

TEST_CASE("decompose_poly: records, norms, rejection") {
    DecomposedPoly one = decompose_poly(Polynomial::constant(3, rat(1)));
    CHECK(one.m == 0);
    CHECK(one.norm2 == 1);
    REQUIRE(one.components.size() == 1);
    CHECK(one.components[0].j == 0);
    CHECK(one.components[0].part_norm2 == std::vector<Rational>{rat(1)});

    Polynomial x = var(3, 1);
    DecomposedPoly mixed = decompose_poly(Polynomial::constant(3, rat(1)) + x);
    CHECK(mixed.m == 1);
    CHECK(mixed.norm2 == rat(4, 3));  // 1 + 1/3, cross term integrates to zero
    REQUIRE(mixed.components.size() == 2);
    CHECK(mixed.components[1].part_norm2 == std::vector<Rational>{rat(1), rat(0)});

    CHECK_THROWS_AS(decompose_poly(x * x), std::domain_error);
}

TEST_CASE("block norms equal expand-then-integrate") {
    Polynomial x = var(3, 1), y = var(3, 2), z = var(3, 3);
    std::vector<Polynomial> bases = {
        Polynomial::constant(3, rat(1)),
        x,
        y,
        x * y,
        y * y - z * z,
        axial_harmonic(2, 3).h.poly,
        Polynomial::constant(3, rat(2)) + x + (y * y - z * z),  // inhomogeneous
    };
    for (const Polynomial& F : bases) {
        DecomposedPoly dp = decompose_poly(F);
        for (unsigned long n = 0; n <= 6; ++n) {
            Polynomial expanded(3);
            for (const HomogeneousHarmonic& comp : homogeneous_components(F)) {
                expanded += primitive(comp, static_cast<unsigned>(n)).poly;
            }
            for (const Rational& r : {rat(1), rat(4, 5)}) {
                CHECK(block_norm_squared(PrimitiveTerm{n, &dp}, r) ==
                      m2_mean_squared(expanded, r));
            }
        }
    }
}

TEST_CASE("extended-precision block norm tracks the exact one") {
    DecomposedPoly dp = decompose_poly(var(3, 1) * var(3, 2));
    PrimitiveTerm t{9, &dp};
    Rational exact = block_norm_squared(t, rat(4, 5));
    BigFloat approx = block_norm_squared_f(t, BigFloat::from_rational(rat(4, 5)));
    BigFloat err = bf_abs(approx - BigFloat::from_rational(exact));
    CHECK(err <= BigFloat::from_rational(exact) * BigFloat(1e-70));
}

TEST_CASE("harmonic basis: dimension, harmonicity, orthogonality") {
    for (unsigned N = 2; N <= 5; ++N) {
        for (unsigned m = 0; m <= 4; ++m) {
            auto basis = harmonic_basis(m, N);
            CHECK(Int(static_cast<long>(basis.size())) == dim_harmonic(m, N));
            for (const auto& h : basis) {
                CHECK(h.degree == m);
                CHECK(laplacian(h.poly).is_zero());
            }
        }
    }
    // the recursive u * I* basis is orthogonal on the sphere
    for (unsigned N = 2; N <= 4; ++N) {
        for (unsigned m = 0; m <= 4; ++m) {
            auto basis = harmonic_basis(m, N);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                for (std::size_t j = i + 1; j < basis.size(); ++j) {
                    CHECK(inner_product(basis[i].poly, basis[j].poly, rat(1)) == 0);
                }
            }
        }
    }
    // distinct degrees are always orthogonal
    CHECK(inner_product(harmonic_basis(1, 3)[0].poly, harmonic_basis(3, 3)[0].poly, rat(2)) == 0);
}
