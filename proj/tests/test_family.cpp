#include <cmath>

#include "arithdyn/errors.hpp"
#include "arithdyn/family.hpp"
#include "doctest.h"

using namespace arithdyn;

namespace {

MarkedFamily quadratic(std::vector<BigRat> marks) { return MarkedFamily::unicritical(2, marks); }

// x^2 + t y^2 over x y: Res = -t up to sign, so t = 0 is bad.
MarkedFamily crossing() {
    std::vector<PolyQ> f{PolyQ::x(), PolyQ{}, PolyQ({1})};
    std::vector<PolyQ> g{PolyQ{}, PolyQ({1}), PolyQ{}};
    return {2, f, g, {Mark{PolyQ({1}), PolyQ({1})}}};
}

}  // namespace

TEST_CASE("specialization of z^2 + t") {
    const auto fam = quadratic({BigRat(0)});
    auto s0 = specialize_exact(fam, BigRat(0));
    CHECK(s0.map.f() == PolyZ({0, 0, 1}));
    CHECK(s0.map.g() == PolyZ({1}));
    REQUIRE(s0.marks.size() == 1);
    CHECK(s0.marks[0] == ProjPointQ(0, 1));
    auto s1 = specialize_exact(fam, BigRat(-1));
    CHECK(s1.map.f() == PolyZ({-1, 0, 1}));
    auto s2 = specialize_exact(fam, BigRat(1, 2));
    CHECK(s2.map.f() == PolyZ({1, 0, 2}));
    CHECK(s2.map.g() == PolyZ({2}));
}

TEST_CASE("quartic slice at s = 1 clears to a coprime integer pair") {
    const auto fam = MarkedFamily::quartic_slice();
    auto s = specialize_exact(fam, BigRat(1));
    CHECK(s.map.f() == PolyZ({12, 0, 6, -8, 3}));
    CHECK(s.map.g() == PolyZ({12}));
    CHECK(s.marks[0] == ProjPointQ(1, 1));
    // coefficients of the quartic slice are rational at every s
    auto s3 = specialize_exact(fam, BigRat(3));
    CHECK(s3.map.degree() == 4);
}

TEST_CASE("resultant polynomial and bad parameters") {
    CHECK(quadratic({BigRat(0)}).resultant_poly() == PolyQ({1}));
    const auto fam = crossing();
    const PolyQ r = fam.resultant_poly();
    for (const BigRat t : {BigRat(3, 7), BigRat(-11, 2), BigRat(40)}) {
        PolyQ ft(std::vector<BigRat>{t, BigRat(0), BigRat(1)}), gt({0, 1});
        CHECK(r.eval(t) == resultant(ft, gt, 2));
    }
    CHECK(r.degree() == 1);
    auto bad = bad_parameters(fam);
    REQUIRE(bad.size() == 1);
    CHECK(std::abs(bad[0].z) < 1e-12);
    CHECK_THROWS_AS(specialize_exact(fam, BigRat(0)), DegenerateParameter);
    CHECK_NOTHROW(specialize_exact(fam, BigRat(1, 3)));
}

TEST_CASE("degenerate marks and invalid families") {
    const auto base = quadratic({BigRat(0)});
    const auto fam = base.with_marks({Mark{PolyQ::x(), PolyQ::x()}});
    CHECK_THROWS_AS(specialize_exact(fam, BigRat(0)), DegenerateParameter);
    CHECK_NOTHROW(specialize_exact(fam, BigRat(2)));
    CHECK_THROWS_AS(base.with_marks({}), InputError);
    CHECK_THROWS_AS(base.with_marks({Mark{PolyQ{}, PolyQ{}}}), InputError);
    std::vector<PolyQ> f{PolyQ{}, PolyQ::x(), PolyQ{}};
    CHECK_THROWS_AS(MarkedFamily(2, f, f, {Mark{PolyQ({1}), PolyQ({1})}}), InputError);
    CHECK_THROWS_AS(MarkedFamily(1, {PolyQ({1})}, {PolyQ({1})}, {Mark{PolyQ({1}), PolyQ({1})}}), InputError);
}

TEST_CASE("parametric height examples") {
    const auto one = quadratic({BigRat(0)});
    const auto two = quadratic({BigRat(0), BigRat(4)});
    CHECK(parametric_height(one, BigRat(0), 1e-10).contains(0.0));
    CHECK(parametric_height(one, BigRat(-2), 1e-10).contains(0.0));
    auto h = parametric_height(two, BigRat(0), 1e-10);
    CHECK(std::abs(h.value - std::log(4.0)) <= 1e-9);
    CHECK(h.radius <= 2e-10);
}

TEST_CASE("sum rule over marks is exact") {
    const std::vector<BigRat> marks{BigRat(0), BigRat(1, 2), BigRat(4), BigRat(-3, 5)};
    const auto fam = quadratic(marks);
    for (const BigRat t : {BigRat(1, 3), BigRat(-7, 4), BigRat(2)}) {
        auto total = parametric_height(fam, t, 1e-8);
        double sum = 0, rad = 0;
        for (std::size_t j = 0; j < marks.size(); ++j) {
            auto c = parametric_height(fam.with_mark(j), t, 1e-8);
            sum += c.value;
            rad += c.radius;
        }
        CHECK(total.value == sum);
        CHECK(total.radius == rad);
    }
}

TEST_CASE("parametric potential examples") {
    const auto one = quadratic({BigRat(0)});
    auto big = parametric_potential(one, Complex(1e6), 1e-10);
    CHECK_FALSE(big.flagged);
    CHECK(std::abs(big.value - 0.5 * std::log(1e6)) <= 2.0);
    auto zero = parametric_potential(one, Complex(0.0), 1e-10);
    CHECK(std::abs(zero.value) <= zero.radius + 1e-12);
    auto two = parametric_potential(quadratic({BigRat(0), BigRat(4)}), Complex(0.0), 1e-10);
    CHECK(std::abs(two.value - std::log(4.0)) <= 1e-9);
    CHECK(two.radius <= 1e-10);
    // the bad parameter of the crossing family is flagged rather than evaluated
    CHECK(parametric_potential(crossing(), Complex(0.0), 1e-8).flagged);
    CHECK_FALSE(parametric_potential(crossing(), Complex(0.5), 1e-8).flagged);
}

TEST_CASE("potential agrees with the archimedean part of the height") {
    const auto fam = quadratic({BigRat(0), BigRat(1), BigRat(-2)});
    // integer parameters: unit resultant, integral marks, so the height is purely archimedean
    for (int t = -4; t <= 4; ++t) {
        auto h = parametric_height(fam, BigRat(t), 1e-9);
        auto g = parametric_potential(fam, Complex(t), 1e-9);
        CHECK(std::abs(h.value - g.value) <= h.radius + g.radius + 1e-12);
    }
    // t = 1/2: the cleared map is 2 F_t, which shifts G by log 2 / (d - 1)
    const auto one = quadratic({BigRat(0)});
    auto s = specialize_exact(one, BigRat(1, 2));
    const ComplexMap cm = ComplexMap::from(s.map);
    auto arch = archimedean_escape_rate(cm, ProjPointC(0.0, 1.0), 1e-10);
    auto g = parametric_potential(one, Complex(0.5), 1e-10);
    CHECK(std::abs(arch.value - std::log(2.0) - g.value) <= arch.radius + g.radius + 1e-12);
}

TEST_CASE("rational sweep for the marks {0, 4}") {
    const auto zero = quadratic({BigRat(0)});
    const auto four = quadratic({BigRat(4)});
    int pcf = 0, box = 0;
    for (long q = 1; q <= 12; ++q) {
        for (long p = -3 * q; p <= 3 * q; ++p) {
            BigRat t(p, q);
            t.canonicalize();
            if (t.get_den() != q) continue;
            const auto h0 = parametric_height(zero, t, 1e-3);
            if (h0.contains(0.0)) {
                ++pcf;
                CHECK(abs(t) <= 2);
                CHECK((t == 0 || t == -1 || t == -2));
            }
            // |t| <= 2 together with |t p_t^n(4)| <= 2 for n = 0, 1
            const bool survives = abs(t) <= 2 && abs(4 * t) <= 2 && abs(t * (16 + t)) <= 2;
            if (survives) {
                ++box;
                CHECK(abs(t) <= BigRat(5, 32));
            }
            if (h0.contains(0.0) && survives) {
                const auto h4 = parametric_height(four, t, 1e-6);
                CHECK_FALSE(h4.contains(0.0));
            }
        }
    }
    CHECK(pcf == 3);
    CHECK(box > 0);
}
