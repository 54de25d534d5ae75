#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "tsys/verify.hpp"

using namespace tsys;

namespace {

FunctionSystem monomials(double a, double b, int degree) {
    std::vector<ExprPtr> funcs;
    funcs.push_back(parse("1"));
    for (int d = 1; d <= degree; ++d) funcs.push_back(parse("x^" + std::to_string(d)));
    return FunctionSystem(a, b, std::move(funcs));
}

VerifyOptions fast_options() {
    VerifyOptions opt;
    opt.quasi_tuples = 128;
    opt.random_tuples = 128;
    return opt;
}

}  // namespace

TEST_CASE("system_determinant: monomial ground truth") {
    FunctionSystem sys = monomials(0.0, 2.0, 2);
    std::vector<double> nodes = {0.0, 1.0, 2.0};
    CHECK(system_determinant(sys, 2, nodes) == doctest::Approx(2.0).epsilon(1e-12));

    // 1x1 determinant is g_0 itself
    FunctionSystem one(0.0, 1.0, {parse("exp(x)"), parse("x")});
    std::vector<double> single = {0.25};
    CHECK(system_determinant(one, 0, single) == doctest::Approx(std::exp(0.25)));

    std::vector<double> bad = {0.3, 0.3};
    CHECK_THROWS_AS(system_determinant(sys, 1, bad), std::invalid_argument);
    std::vector<double> outside = {0.5, 3.0};
    CHECK_THROWS_AS(system_determinant(sys, 1, outside), std::invalid_argument);
}

TEST_CASE("system_determinant equals the Vandermonde product for monomials") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 1; k <= 6; ++k) {
        FunctionSystem sys = monomials(0.0, 1.0, k);
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<double> nodes(k + 1);
            for (double& x : nodes) x = dist(rng);
            std::sort(nodes.begin(), nodes.end());
            bool distinct = true;
            for (int i = 0; i + 1 <= k; ++i) {
                if (nodes[i + 1] - nodes[i] < 1e-4) distinct = false;
            }
            if (!distinct) continue;
            double det = system_determinant(sys, k, nodes);
            double ref = oracles::vandermonde_product(nodes);
            CHECK(std::abs(det - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("adjacent node swap negates the sampled determinant matrix") {
    // system_determinant itself enforces increasing nodes, so permute at the
    // matrix level with the same system functions
    FunctionSystem sys = monomials(0.0, 1.0, 2);
    const double nodes[] = {0.1, 0.4, 0.9};
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = sys.value(i, nodes[j]);
    }
    Matrix swapped = m;
    for (int i = 0; i < 3; ++i) std::swap(swapped(i, 0), swapped(i, 1));
    CHECK(determinant(swapped).value == doctest::Approx(-determinant(m).value).epsilon(1e-12));
}

TEST_CASE("wronskian basics") {
    FunctionSystem sys = monomials(0.0, 1.0, 2);
    for (double x : {0.2, 0.5, 0.8}) {
        CHECK(wronskian(sys, 2, x) == doctest::Approx(2.0).epsilon(1e-12));
    }

    FunctionSystem ex(-1.0, 1.0, {parse("1"), parse("exp(x)")});
    CHECK(wronskian(ex, 1, 0.0) == doctest::Approx(1.0));

    FunctionSystem g0(0.0, 1.0, {parse("1"), parse("x")});
    CHECK(wronskian(g0, 0, 0.5) == 1.0);  // W_0^0 = g_0

    CHECK_THROWS_AS(wronskian(sys, 2, 0.0), std::invalid_argument);  // endpoint
    CHECK_THROWS_AS(wronskian(sys, 2, 1.5), std::invalid_argument);
}

TEST_CASE("wronskian of monomials is the factorial product") {
    FunctionSystem sys = monomials(0.0, 1.0, 6);
    // prod_{j<=6} j! = 24883200
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(wronskian(sys, 6, x) == doctest::Approx(24883200.0).epsilon(1e-9));
    }
}

TEST_CASE("check_tplus verdicts") {
    VerifyOptions opt = fast_options();

    SUBCASE("monomials verify plus") {
        FunctionSystem sys = monomials(0.0, 1.0, 2);
        Verdict v = check_tplus(sys, 2, opt);
        CHECK(v.status == VerdictStatus::VerifiedPlus);
        CHECK(v.method == VerifyMethod::DeterminantSampling);
        CHECK(v.sample_size == 476);  // C(12,3) combos + 128 quasi + 128 random
    }

    SUBCASE("reversed pair verifies minus") {
        FunctionSystem sys(0.0, 1.0, {parse("x"), parse("1")});
        Verdict v = check_tplus(sys, 1, opt);
        CHECK(v.status == VerdictStatus::VerifiedMinus);
    }

    SUBCASE("odd symmetric system is refuted with a witness") {
        FunctionSystem sys(-1.0, 1.0, {parse("1"), parse("x"), parse("x^3")});
        Verdict v = check_tplus(sys, 2, opt);
        REQUIRE(v.status == VerdictStatus::Refuted);
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->nodes.size() == 3);
    }

    SUBCASE("quadratic triple is sign-definite negative, not refuted") {
        // det(1, x, x - x^2) = -vandermonde on increasing triples
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("x"), parse("x * (1 - x)")});
        Verdict v = check_tplus(sys, 2, opt);
        CHECK(v.status == VerdictStatus::VerifiedMinus);
    }

    SUBCASE("empty sample is rejected") {
        FunctionSystem sys = monomials(0.0, 1.0, 1);
        SimplexSample empty;
        CHECK_THROWS_AS(check_tplus(sys, 1, empty, opt), std::invalid_argument);
    }
}

TEST_CASE("sign constancy: fresh random tuples keep the verified sign") {
    FunctionSystem sys = monomials(0.0, 1.0, 2);
    VerifyOptions opt = fast_options();
    REQUIRE(check_tplus(sys, 2, opt).status == VerdictStatus::VerifiedPlus);

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    int tested = 0;
    while (tested < 10000) {
        std::vector<double> nodes = {dist(rng), dist(rng), dist(rng)};
        std::sort(nodes.begin(), nodes.end());
        if (nodes[1] - nodes[0] < 1e-12 || nodes[2] - nodes[1] < 1e-12) continue;
        CHECK(system_determinant(sys, 2, nodes) > 0.0);
        ++tested;
    }
}

TEST_CASE("check_mplus_wronskian verdicts") {
    VerifyOptions opt = fast_options();

    SUBCASE("monomials to degree six verify plus") {
        FunctionSystem sys = monomials(0.0, 1.0, 6);
        Verdict v = check_mplus_wronskian(sys, 6, opt);
        CHECK(v.status == VerdictStatus::VerifiedPlus);
        CHECK(v.method == VerifyMethod::Wronskian);
    }

    SUBCASE("cubic gap system is refuted with an interior witness") {
        FunctionSystem sys(-1.0, 1.0, {parse("1"), parse("x"), parse("x^3")});
        Verdict v = check_mplus_wronskian(sys, 2, opt);
        REQUIRE(v.status == VerdictStatus::Refuted);
        CHECK(v.level == 2);
        REQUIRE(v.witness.has_value());
        double x = v.witness->nodes.at(0);
        CHECK(x > -1.0);
        CHECK(x < 0.0);
        // W_0^2 = 6x at the witness
        CHECK(v.witness->determinant == doctest::Approx(6.0 * x).epsilon(1e-9));
    }

    SUBCASE("exponential pair verifies plus") {
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("exp(x)")});
        CHECK(check_mplus_wronskian(sys, 1, opt).status == VerdictStatus::VerifiedPlus);
    }

    SUBCASE("vanishing interior Wronskian is inconclusive") {
        // W_0^1 of (1, x^3) is 3x^2, zero at the interior midpoint of [-1, 1]
        FunctionSystem sys(-1.0, 1.0, {parse("1"), parse("x^3")});
        Verdict v = check_mplus_wronskian(sys, 1, opt);
        CHECK(v.status == VerdictStatus::Inconclusive);
    }

    SUBCASE("vanishing g_0 at an endpoint is inconclusive, not refuted") {
        FunctionSystem sys(0.0, 1.0, {parse("x"), parse("x^2")});
        Verdict v = check_mplus_wronskian(sys, 1, opt);
        CHECK(v.status == VerdictStatus::Inconclusive);
        CHECK(v.level == 0);
    }
}

TEST_CASE("wronskian and determinant sampling never contradict") {
    VerifyOptions opt = fast_options();
    std::vector<FunctionSystem> plus_systems;
    plus_systems.push_back(monomials(0.0, 1.0, 4));
    plus_systems.push_back(FunctionSystem(0.0, 1.0, {parse("1"), parse("exp(x)"), parse("exp(2*x)")}));
    plus_systems.push_back(FunctionSystem(0.0, 1.0, {parse("1"), parse("x"), parse("exp(x)")}));

    for (const FunctionSystem& sys : plus_systems) {
        int n = sys.size() - 1;
        Verdict w = check_mplus_wronskian(sys, n, opt);
        REQUIRE(w.status == VerdictStatus::VerifiedPlus);
        for (int k = 0; k <= n; ++k) {
            CHECK(check_tplus(sys, k, opt).status == VerdictStatus::VerifiedPlus);
        }
    }
}

TEST_CASE("normalize_signs") {
    VerifyOptions opt = fast_options();

    SUBCASE("flip restores the Vandermonde sign") {
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("-x")});
        SignVector s = normalize_signs(sys, 1, opt);
        CHECK(s.signs == std::vector<int>{1, -1});
    }

    SUBCASE("already normalized systems get all plus") {
        FunctionSystem sys = monomials(0.0, 1.0, 3);
        SignVector s = normalize_signs(sys, 3, opt);
        CHECK(s.signs == std::vector<int>{1, 1, 1, 1});
    }

    SUBCASE("negative leading function") {
        FunctionSystem sys(0.0, 1.0, {parse("-1"), parse("x")});
        SignVector s = normalize_signs(sys, 1, opt);
        CHECK(s.signs == std::vector<int>{-1, 1});
    }

    SUBCASE("idempotence: applying the signs re-normalizes to all plus") {
        for (const char* g1 : {"-x", "x^2", "-exp(x)"}) {
            FunctionSystem sys(0.5, 1.5, {parse("-1"), parse(g1)});
            SignVector s = normalize_signs(sys, 1, opt);
            FunctionSystem oriented = apply_signs(sys, s);
            SignVector again = normalize_signs(oriented, 1, opt);
            CHECK(again.signs == std::vector<int>{1, 1});
        }
    }

    SUBCASE("non M-system is rejected with the level") {
        FunctionSystem sys(-1.0, 1.0, {parse("1"), parse("x"), parse("x^3")});
        try {
            normalize_signs(sys, 2, opt);
            FAIL("expected NotMSystemError");
        } catch (const NotMSystemError& e) {
            CHECK(e.level == 2);
        }
    }
}

TEST_CASE("positivity certificates") {
    VerifyOptions opt = fast_options();

    SUBCASE("constant function certifies itself") {
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("x")});
        std::vector<double> grid;
        for (int i = 0; i <= 64; ++i) grid.push_back(i / 64.0);
        auto cert = positivity_certificate(sys, 0, grid, opt);
        REQUIRE(cert.has_value());
        CHECK(cert->margin == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(cert->coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("pair (1, x) has a unit margin certificate") {
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("x"), parse("x^2")});
        std::vector<double> grid;
        for (int i = 0; i <= 128; ++i) grid.push_back(i / 128.0);
        auto cert = positivity_certificate(sys, 1, grid, opt);
        REQUIRE(cert.has_value());
        CHECK(cert->margin > 0.5);
        // the certificate really is a lower bound on the grid
        for (double x : grid) {
            double v = cert->coefficients[0] * sys.value(0, x) +
                       cert->coefficients[1] * sys.value(1, x);
            CHECK(v >= cert->margin - 1e-12);
        }
    }

    SUBCASE("no sign-definite function alone has no certificate") {
        FunctionSystem sys(0.0, 1.0, {parse("x - 0.5"), parse("x")});
        std::vector<double> grid;
        for (int i = 0; i <= 64; ++i) grid.push_back(i / 64.0);
        CHECK(!positivity_certificate(sys, 0, grid, opt).has_value());
    }

    SUBCASE("mixed-sign pair still admits the combination (1, -1)") {
        FunctionSystem sys(0.0, 1.0, {parse("x"), parse("x - 1"), parse("1")});
        std::vector<double> grid;
        for (int i = 0; i <= 128; ++i) grid.push_back(i / 128.0);
        auto cert = positivity_certificate(sys, 1, grid, opt);
        REQUIRE(cert.has_value());
        CHECK(cert->margin == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(cert->coefficients[0] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(cert->coefficients[1] == doctest::Approx(-1.0).epsilon(1e-8));
    }

    SUBCASE("grid must span the interval") {
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("x")});
        std::vector<double> grid = {0.2, 0.5, 0.8};
        CHECK_THROWS_AS(positivity_certificate(sys, 0, grid, opt), std::invalid_argument);
    }
}
