#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "moyal/grid.hpp"
#include "moyal/grid_star.hpp"
#include "moyal/models/damped.hpp"
#include "moyal/star.hpp"
#include "moyal/bopp.hpp"
#include "moyal/sampling.hpp"
#include "moyal/wigner_transform.hpp"
#include "test_support.hpp"

using namespace moyal;
using moyal::testing::random_polygauss;

namespace {

const cplx I(0.0, 1.0);

PolyGauss w0_harmonic() { return PolyGauss::gaussian(QuadForm::make(1.0, 0.0, 1.0), 1.0, 1.0 / M_PI); }

double phi0(double x) { return std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x); }

}  // namespace

TEST(Grid, SpecValidation) {
    EXPECT_THROW((GridSpec{1.0, 0.0, -1.0, 1.0, 16, 16}.validate()), ParameterError);
    EXPECT_THROW((GridSpec{-1.0, 1.0, -1.0, 1.0, 7, 16}.validate()), ParameterError);
    const GridSpec s = GridSpec::square(6.0, 13);
    EXPECT_DOUBLE_EQ(s.dq(), 1.0);
    EXPECT_DOUBLE_EQ(s.q(12), 6.0);
}

TEST(Grid, SampleConstant) {
    const GridField g = sample([](double, double) { return 1.0; }, GridSpec::square(3.0, 16), 1.0);
    for (const auto& v : g.values) EXPECT_EQ(v, cplx(1.0));
}

TEST(Grid, SampleGaussianPeak) {
    const GridField g = sample(w0_harmonic(), GridSpec::square(6.0, 129));
    EXPECT_NEAR(g.max_abs(), 1.0 / M_PI, 1e-15);
    EXPECT_NEAR(std::abs(g.at(64, 64) - 1.0 / M_PI), 0.0, 1e-15);
}

TEST(Grid, DistanceScaling) {
    const GridField a = sample(w0_harmonic(), GridSpec::square(6.0, 64));
    GridField b = a;
    b *= 1.01;
    const GridDistance d0 = grid_distance(a, a);
    EXPECT_EQ(d0.sup_rel, 0.0);
    EXPECT_EQ(d0.l2_rel, 0.0);
    const GridDistance d = grid_distance(a, b);
    EXPECT_NEAR(d.sup_rel, 0.01, 1e-12);
    EXPECT_NEAR(d.l2_rel, 0.01, 1e-12);
    EXPECT_THROW(grid_distance(a, sample(w0_harmonic(), GridSpec::square(5.0, 64))), ParameterError);
}

TEST(Grid, CsvRoundTrip) {
    const GridField a = sample(w0_harmonic(), GridSpec{-3.0, 3.0, -2.0, 2.5, 9, 11});
    std::ostringstream os;
    write_grid_csv(os, a, {{"model", "harmonic"}});
    std::istringstream is(os.str());
    std::vector<std::pair<std::string, std::string>> header;
    const GridField b = read_grid_csv(is, &header);
    EXPECT_TRUE(a.spec == b.spec);
    EXPECT_EQ(grid_distance(a, b).sup_rel, 0.0);
    ASSERT_EQ(header.size(), 1u);
    EXPECT_EQ(header[0].second, "harmonic");
    EXPECT_NE(os.str().find("\n-3.0000000000000000e+00,-2.0000000000000000e+00,"), std::string::npos);
}

TEST(StarNumeric, PurityOfGroundState) {
    const GridField w = sample(w0_harmonic(), GridSpec::square(8.0, 128));
    const GridField ww = star_numeric(w, w);
    GridField expected = w;
    expected *= 1.0 / (2.0 * M_PI);
    EXPECT_LT(grid_distance(expected, ww).sup_rel, 1e-4);
    EXPECT_TRUE(ww.warnings.empty());
}

TEST(StarNumeric, UnitWithinDiscretization) {
    // the constant does not decay; it is represented exactly by the zero mode
    const GridSpec s = GridSpec::square(8.0, 64);
    const GridField a = sample(w0_harmonic(), s);
    const GridField one = sample([](double, double) { return 1.0; }, s, 1.0);
    const GridField r = star_numeric(a, one);
    EXPECT_LT(grid_distance(a, r).sup_rel, 1e-10);
    EXPECT_FALSE(r.warnings.empty());  // the constant violates boundary decay
}

TEST(StarNumeric, MatchesSymbolicStar) {
    std::mt19937 rng(101);
    const GridSpec s = GridSpec::square(8.0, 96);
    for (int trial = 0; trial < 3; ++trial) {
        const PolyGauss f = random_polygauss(rng, trial + 1);
        const PolyGauss g = random_polygauss(rng, 2 - trial % 2);
        const GridField num = star_numeric(sample(f, s), sample(g, s));
        const GridField sym = sample(polygauss_star(f, g), s);
        EXPECT_LT(grid_distance(sym, num).sup_rel, 1e-6) << trial;
    }
}

TEST(StarNumeric, SqueezedGaussianSquared) {
    const PolyGauss g = PolyGauss::gaussian(QuadForm::make(2.0, 0.0, 0.5), 1.0);
    const PolyGauss sym = gaussian_star(g, g);
    const GridSpec s = GridSpec::square(8.0, 128);
    const GridField num = star_numeric(sample(g, s), sample(g, s));
    // compare on [-4, 4]^2
    double num_err = 0.0, peak = 0.0;
    for (int i = 0; i < s.nq; ++i)
        for (int j = 0; j < s.np; ++j) {
            if (std::abs(s.q(i)) > 4.0 || std::abs(s.p(j)) > 4.0) continue;
            num_err = std::max(num_err, std::abs(num.at(i, j) - sym(s.q(i), s.p(j))));
            peak = std::max(peak, std::abs(sym(s.q(i), s.p(j))));
        }
    EXPECT_LT(num_err, 1e-8);
    EXPECT_GT(peak, 0.1);
}

TEST(StarNumeric, BoppProductOfPositionMomentum) {
    // s = q p acting on e^{-q^2-p^2}: Bopp expansion vs grid at 20 points
    const PolyGauss f = PolyGauss::gaussian(QuadForm::make(1.0, 0.0, 1.0), 1.0);
    const PolyGauss bopp = star_left(Polynomial::monomial(1, 1), f);
    const GridSpec s = GridSpec::square(12.0, 192);
    const FlatTopWindow win{8.0, 0.6};
    const GridField sym = sample([&](double q, double p) { return q * p * win(q, p); }, s, 1.0);
    const GridField num = star_numeric(sym, sample(f, s));
    const auto pts = sample_points(Box{-2.5, 2.5, -2.5, 2.5}, 20);
    // evaluate the grid product at the nearest nodes
    double err = 0.0;
    for (const auto& x : pts) {
        const int i = static_cast<int>(std::lround((x[0] - s.qmin) / s.dq()));
        const int j = static_cast<int>(std::lround((x[1] - s.pmin) / s.dp()));
        err = std::max(err, std::abs(num.at(i, j) - bopp(s.q(i), s.p(j))));
    }
    EXPECT_LT(err, 1e-10);
}

TEST(StarNumeric, HeisenbergOnWindowedSymbols) {
    const GridSpec s = GridSpec::square(10.0, 160);
    const FlatTopWindow win{6.5, 0.6};
    const double hbar = 1.0;
    const GridField qf = sample([&](double q, double p) { return q * win(q, p); }, s, hbar);
    const GridField pf = sample([&](double q, double p) { return p * win(q, p); }, s, hbar);
    const GridField f = sample(w0_harmonic(), s);
    // [q*, p*] f = i hbar f
    const GridField lhs = star_numeric(qf, star_numeric(pf, f)) - star_numeric(pf, star_numeric(qf, f));
    GridField expected = f;
    expected *= I * hbar;
    EXPECT_LT(grid_distance(expected, lhs).sup_rel, 1e-6);
}

TEST(StarNumeric, TraceProperty) {
    std::mt19937 rng(7);
    const GridSpec s = GridSpec::square(8.0, 96);
    const GridField a = sample(random_polygauss(rng, 2), s);
    const GridField b = sample(random_polygauss(rng, 3), s);
    GridField prod = a;
    for (std::size_t k = 0; k < prod.values.size(); ++k) prod.values[k] *= b.values[k];
    const cplx lhs = star_numeric(a, b).integral(), rhs = prod.integral();
    EXPECT_LT(std::abs(lhs - rhs), 1e-6 * std::abs(rhs));
}

TEST(StarNumeric, SpecMismatchRejected) {
    const GridField a = sample(w0_harmonic(), GridSpec::square(8.0, 32));
    const GridField b = sample(w0_harmonic(), GridSpec::square(8.0, 40));
    EXPECT_THROW(star_numeric(a, b), ParameterError);
}

TEST(StarNumeric, ThreadCountDoesNotChangeBits) {
    std::mt19937 rng(9);
    const GridSpec s = GridSpec::square(8.0, 48);
    const GridField a = sample(random_polygauss(rng, 2), s);
    const GridField b = sample(random_polygauss(rng, 2), s);
    setenv("MOYAL_THREADS", "1", 1);
    const GridField r1 = star_numeric(a, b);
    setenv("MOYAL_THREADS", "3", 1);
    const GridField r3 = star_numeric(a, b);
    unsetenv("MOYAL_THREADS");
    EXPECT_EQ(r1.values, r3.values);
}

TEST(MoyalBracket, AntisymmetricSelfBracketIsZero) {
    std::mt19937 rng(13);
    const GridSpec s = GridSpec::square(8.0, 48);
    const GridField a = sample(random_polygauss(rng, 2), s);
    const GridField br = moyal_bracket_numeric(a, a);
    EXPECT_EQ(br.max_abs(), 0.0);
}

TEST(MoyalBracket, IntegratesToZero) {
    std::mt19937 rng(17);
    const GridSpec s = GridSpec::square(8.0, 96);
    const GridField a = sample(random_polygauss(rng, 2), s);
    const GridField b = sample(random_polygauss(rng, 1), s);
    const GridField br = moyal_bracket_numeric(a, b);
    EXPECT_LT(std::abs(br.integral()), 1e-8 * std::max(1.0, br.max_abs()));
}

TEST(MoyalBracket, CanonicalPairOnWindowedFields) {
    // with a Gaussian window chi the bracket {q chi, p chi}_M is i hbar chi^2 plus window-derivative
    // terms; the symbolic engine gives it exactly
    const GridSpec s = GridSpec::square(12.0, 192);
    const QuadForm wide = QuadForm::make(0.2, 0.0, 0.2);
    const PolyGauss qg(Polynomial::q(), wide, 1.0), pg(Polynomial::p(), wide, 1.0);
    const PolyGauss exact = moyal_bracket(qg, pg);
    const GridField num = moyal_bracket_numeric(sample(qg, s), sample(pg, s));
    const GridField ref = sample(exact, s);
    EXPECT_LT(grid_distance(ref, num).sup_rel, 1e-6);
}

TEST(WignerTransform, GroundState) {
    const GridSpec s = GridSpec::square(5.0, 41);
    const GridField w = wigner_from_wavefunction([](double x) { return cplx(phi0(x)); }, 9.0, s);
    EXPECT_TRUE(w.warnings.empty());
    const GridField ref = sample(w0_harmonic(), s);
    double err = 0.0;
    for (std::size_t k = 0; k < w.values.size(); ++k) err = std::max(err, std::abs(w.values[k] - ref.values[k]));
    EXPECT_LT(err, 1e-8);
}

TEST(WignerTransform, FirstExcitedOrigin) {
    const Wavefunction phi1 = [](double x) { return cplx(hermite_function(1, x)); };
    EXPECT_NEAR(wigner_at(phi1, 9.0, 0.0, 0.0), -1.0 / M_PI, 1e-12);
}

TEST(WignerTransform, OddParityNegativeAtOrigin) {
    const Wavefunction phi = [](double x) { return cplx(x * x * x * std::exp(-0.3 * x * x)); };
    const double n2 = wavefunction_norm2(phi, 14.0);
    // W(0, 0) = (2 pi hbar)^{-1} int phi*(z/2) phi(-z/2) dz = -|phi|^2 / (pi hbar)
    EXPECT_NEAR(wigner_at(phi, 14.0, 0.0, 0.0), -n2 / M_PI, 1e-12 * n2);
}

TEST(WignerTransform, NormalizationAndMarginal) {
    const GridSpec s = GridSpec::square(7.0, 141);
    const Wavefunction phi = [](double x) { return cplx(hermite_function(2, x)); };
    const GridField w = wigner_from_wavefunction(phi, 10.0, s);
    EXPECT_NEAR(w.integral().real(), 1.0, 1e-6);
    for (int i = 0; i < s.nq; i += 7) {
        double m = 0.0;
        for (int j = 0; j < s.np; ++j) m += ((j == 0 || j == s.np - 1) ? 0.5 : 1.0) * w.at(i, j).real();
        m *= s.dp();
        EXPECT_NEAR(m, std::norm(phi(s.q(i))), 1e-6);
    }
}

TEST(WignerTransform, WarnsAndRejects) {
    const GridSpec s = GridSpec::square(4.0, 16);
    const GridField w = wigner_from_wavefunction([](double x) { return cplx(2.0 * phi0(x)); }, 9.0, s);
    EXPECT_FALSE(w.warnings.empty());
    EXPECT_THROW(wigner_from_wavefunction([](double x) { return cplx(phi0(x)); }, 1.0, s), DomainError);
    EXPECT_THROW(wigner_from_wavefunction([](double x) { return cplx(phi0(x)); }, -1.0, s), DomainError);
}

TEST(WignerTransform, HermiteFunctionsOrthonormal) {
    const GaussLegendre gl(64);
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
            double s = 0.0;
            for (int k = -10; k < 10; ++k)
                s += gl.integrate([&](double x) { return hermite_function(a, x, 2.0, 0.5, 0.7) * hermite_function(b, x, 2.0, 0.5, 0.7); },
                                  k, k + 1.0);
            EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-13);
        }
}

TEST(MoyalBracket, StationaryDampedStateCommutesWithHamiltonian) {
    const GridSpec s = GridSpec::square(12.0, 192);
    const FlatTopWindow win{8.0, 0.6};
    const Polynomial h = damped_hamiltonian(0.5);
    const GridField H = sample([&](double q, double p) { return h.evaluate(q, p) * win(q, p); }, s, 1.0);
    const GridField W = sample(damped_wigner({0.5, 2}), s);
    const GridField HW = star_numeric(H, W);
    const GridField br = HW - star_numeric(W, H);
    EXPECT_LT(br.max_abs(), 1e-6 * HW.max_abs());
    EXPECT_LT(std::abs(br.integral()), 1e-8);
}
