#include <cmath>

#include "doctest.h"
#include "psdorder/errors.hpp"
#include "psdorder/linmodels.hpp"
#include "psdorder/random.hpp"

using namespace psdorder;

namespace {

LinearModel model(const Matrix& x, const SymMatrix& d, double sigma2 = 1.0) {
  return LinearModel{x, PsdMatrix::certify(d), sigma2, "m"};
}

/// Orthogonal projector onto the column space of a full-column-rank X.
Matrix hat(const Matrix& x) { return projector_onto(column_space(x)).matrix(); }

}  // namespace

TEST_SUITE("linmodels") {
  TEST_CASE("efficiency_matrix examples") {
    const auto m = efficiency_matrix(model(Matrix::identity(3), SymMatrix::identity(3)));
    CHECK(max_abs_diff(m.matrix(), 0.5 * Matrix::identity(3)) < 1e-14);

    RandomStream rng(2);
    const SymMatrix d = rng.psd(3, 3);
    const auto reduced = efficiency_matrix(model(d, d), {}, EfficiencyForm::reduced);
    CHECK(max_abs_diff(reduced.matrix(), d) < 1e-10 * d.max_abs());
    // The general form of the same model is D (I + D)^-1.
    const auto general = efficiency_matrix(model(d, d));
    const SymMatrix expected = sym_eig(d).apply([](double l) { return l / (1.0 + l); });
    CHECK(max_abs_diff(general.matrix(), expected) < 1e-10);

    CHECK(efficiency_matrix(model(Matrix(3, 2), SymMatrix::identity(3))).matrix().max_abs() == 0.0);
  }

  TEST_CASE("the efficiency matrix does not depend on the inner inverse") {
    RandomStream rng(3);
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = 3 + static_cast<std::size_t>(t % 4);
      const Matrix x = rng.gaussian(n, 2);
      const SymMatrix d = rng.psd(n, static_cast<std::size_t>(t % 3));  // often singular
      const auto lm = model(x, d);
      const auto m0 = efficiency_matrix(lm, {}, EfficiencyForm::general, 0);
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto ms = efficiency_matrix(lm, {}, EfficiencyForm::general, seed);
        CHECK(max_abs_diff(ms.matrix(), m0.matrix()) < 1e-8 * std::max(1.0, m0.matrix().max_abs()));
      }
    }
  }

  TEST_CASE("model_compare examples") {
    RandomStream rng(4);
    const SymMatrix d = rng.psd(3, 3);
    const auto self = model_compare(model(d, d), model(d, d));
    CHECK(self.l1_geq_l2);
    CHECK(self.l2_geq_l1);
    CHECK(self.form == EfficiencyForm::reduced);

    const auto v = model_compare(model(Matrix::identity(2), SymMatrix::identity(2)),
                                 model(2.0 * Matrix::identity(2), 2.0 * SymMatrix::identity(2)));
    CHECK_FALSE(v.l1_geq_l2);
    CHECK(v.l2_geq_l1);

    CHECK_THROWS_AS(model_compare(model(Matrix::identity(2), SymMatrix::identity(2)),
                                  model(Matrix(2, 1, 1.0), SymMatrix::identity(2))),
                    DimensionMismatch);
  }

  TEST_CASE("model_compare on (y, D beta, D) pairs mirrors lowner_leq(D2, D1)") {
    RandomStream rng(5);
    int agree_true = 0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(t % 4);
      const SymMatrix d1 = rng.psd(n, n);
      SymMatrix d2 = rng.psd(n, n);
      if (t % 3 == 0) {
        // Shrink d1 along a unit direction by half its smallest eigenvalue.
        Vector u = rng.normal_vector(n);
        const double len = norm2(u);
        for (double& c : u) c /= len;
        d2 = d1 - (0.5 * sym_eig(d1).lambda.back()) * SymMatrix::outer(u);
      } else if (t % 3 == 1) {
        d2 = d1 + rng.psd(n, 1);
      }
      const auto v = model_compare(model(d1, d1), model(d2, d2));
      CHECK(v.l1_geq_l2 == lowner_leq(d2, d1).holds);
      agree_true += v.l1_geq_l2;
    }
    CHECK(agree_true > 0);
  }

  TEST_CASE("estimator_covariance") {
    RandomStream rng(6);
    const SymMatrix d = rng.psd(3, 3);
    const auto lm = model(Matrix::identity(3), d, 2.5);
    CHECK(max_abs_diff(estimator_covariance(Matrix::identity(3), lm).matrix(), 2.5 * d.matrix()) < 1e-12);
    CHECK(estimator_covariance(Matrix(3, 3), lm).matrix().max_abs() == 0.0);
    const Matrix h = hat(rng.gaussian(3, 1));
    const auto lm_i = model(Matrix::identity(3), SymMatrix::identity(3), 2.0);
    CHECK(max_abs_diff(estimator_covariance(h, lm_i).matrix(), 2.0 * h) < 1e-14);
  }

  TEST_CASE("BLUE: the hat matrix under D = I") {
    RandomStream rng(7);
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 3 + static_cast<std::size_t>(t % 5);
      const std::size_t p = 1 + static_cast<std::size_t>(t % (n - 1));
      const Matrix x = rng.gaussian(n, p);
      const auto v = blue_check(hat(x), model(x, SymMatrix::identity(n)));
      CHECK(v.cond_i);
      CHECK(v.cond_ii);
      CHECK(v.cond_iii);
      CHECK(v.is_blue());
      REQUIRE(v.sim_cong.has_value());
      CHECK(v.sim_cong->r == static_cast<int>(p));
      CHECK(v.sim_cong->s_rank == static_cast<int>(n));
    }
  }

  TEST_CASE("BLUE negative controls") {
    const Matrix x{{1}, {1}, {1}};
    const auto lm = model(x, SymMatrix::identity(3));
    const auto zero = blue_check(Matrix(3, 3), lm);
    CHECK_FALSE(zero.cond_i);
    CHECK_FALSE(zero.is_blue());
    CHECK_THROWS_AS(blue_check(Matrix::identity(3), lm), PreconditionViolated);
    // Unbiased but not best: an oblique projector onto Im X.
    Matrix oblique(3, 3);
    for (std::size_t i = 0; i < 3; ++i) oblique(i, 0) = 1.0;
    const auto ob = blue_check(oblique, lm);
    CHECK(ob.cond_i);
    CHECK_FALSE(ob.is_blue());
  }

  TEST_CASE("qform_rank_criterion examples") {
    const PsdMatrix v = PsdMatrix::certify(SymMatrix::identity(3));
    const Vector mu(3, 0.0);
    const auto cochran = qform_rank_criterion(
        {PsdMatrix::certify(SymMatrix::diagonal({1.0, 0.0, 0.0})), PsdMatrix::certify(SymMatrix::diagonal({0.0, 1.0, 1.0}))},
        v, mu);
    CHECK(cochran.overall);
    REQUIRE(cochran.forms.size() == 2);
    CHECK(cochran.forms[0].rank == 1);
    CHECK(cochran.forms[1].rank == 2);
    CHECK(cochran.s == 3);

    const PsdMatrix a = PsdMatrix::certify(SymMatrix::diagonal({1.0, 2.0, 0.0}));
    const auto single = qform_rank_criterion({a}, v, mu);
    CHECK(single.overall);
    CHECK(single.forms[0].rank == single.s);

    const PsdMatrix e11 = PsdMatrix::certify(SymMatrix::diagonal({1.0, 0.0, 0.0}));
    CHECK_FALSE(qform_rank_criterion({e11, e11}, v, mu).overall);
  }

  TEST_CASE("chi-squared CDF reference values") {
    // chi2(2) has CDF 1 - exp(-x/2).
    for (double x : {0.1, 1.0, 3.0, 10.0}) CHECK(chi2_cdf(x, 2) == doctest::Approx(1.0 - std::exp(-x / 2.0)));
    // chi2(1) has CDF erf(sqrt(x/2)).
    for (double x : {0.2, 1.0, 4.0}) CHECK(chi2_cdf(x, 1) == doctest::Approx(std::erf(std::sqrt(x / 2.0))));
    CHECK(chi2_cdf(-1.0, 3) == 0.0);
    CHECK(chi2_cdf(0.0, 0) == 1.0);
  }

  TEST_CASE("Monte Carlo on small instances") {
    const PsdMatrix v = PsdMatrix::certify(SymMatrix::identity(3));
    const Vector mu(3, 0.0);
    const PsdMatrix e11 = PsdMatrix::certify(SymMatrix::diagonal({1.0, 0.0, 0.0}));
    const auto single = mc_quadratic_forms({e11}, v, mu, 20000, 3);
    CHECK(single.df == std::vector<int>{1});
    CHECK(single.ks[0] < 0.02);
    CHECK(single.mean[0] == doctest::Approx(1.0).epsilon(0.05));

    const auto twin = mc_quadratic_forms({e11, e11}, v, mu, 5000, 3);
    CHECK(twin.correlation(0, 1) == doctest::Approx(1.0));

    // Same seed, same numbers.
    const auto again = mc_quadratic_forms({e11}, v, mu, 20000, 3);
    CHECK(again.ks == single.ks);
  }

  TEST_CASE("model validation") {
    LinearModel bad{Matrix(2, 1), PsdMatrix::certify(SymMatrix::identity(3)), 1.0, "bad"};
    CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
    LinearModel neg{Matrix(3, 1), PsdMatrix::certify(SymMatrix::identity(3)), -1.0, "neg"};
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  }
}
