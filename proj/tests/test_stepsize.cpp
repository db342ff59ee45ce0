#include "bregman/stepsize.hpp"

#include "bregman/errors.hpp"
#include "bregman/rng.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace bregman;

namespace {

// Independent root of theta^g - c(1-theta) = 0 on (0, 1).
double bisect_theta(double gamma, double c) {
    return oracles::bisect(
        [&](double t) { return std::pow(t, gamma) - c * (1.0 - t); }, 1e-12, 1.0,
        1e-18);
}

double bisect_next_root(double gamma, double theta_k) {
    return bisect_theta(gamma, std::pow(theta_k, gamma));
}

double bisect_next_gain(double gamma, double theta_k, double gk, double gn) {
    return bisect_theta(gamma, (gk / gn) * std::pow(theta_k, gamma));
}

} // namespace

TEST_SUITE_BEGIN("stepsize");

TEST_CASE("explicit sequence values") {
    CHECK(theta_explicit(2.0, 0) == 1.0);
    CHECK(theta_explicit(2.0, 2) == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(theta_explicit(1.5, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
    CHECK_THROWS_AS(theta_explicit(0.5, 1), ConfigError);
    CHECK_THROWS_AS(theta_explicit(2.0, -1), ConfigError);
}

TEST_CASE("equality root frozen values") {
    // gamma 2, theta 1: theta^2 + theta - 1 = 0 -> (sqrt 5 - 1)/2
    CHECK(theta_next_root(2.0, 1.0) ==
          doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-14));
    // gamma 1 closed form
    CHECK(theta_next_root(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(theta_next_root(1.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("equality root matches bisection across gammas") {
    for (double gamma : {1.2, 1.5, 2.0, 2.5}) {
        double theta = 1.0;
        for (int k = 0; k < 50; ++k) {
            const double next = theta_next_root(gamma, theta);
            const double ref = bisect_next_root(gamma, theta);
            CHECK(next == doctest::Approx(ref).epsilon(1e-12));
            // residual of the defining equation, relative to its scale
            const double res = std::pow(next, gamma) -
                               std::pow(theta, gamma) * (1.0 - next);
            CHECK(std::abs(res) <= 1e-14 * std::pow(theta, gamma));
            theta = next;
        }
    }
}

TEST_CASE("root sequence dominated by gamma/(k+gamma)") {
    for (double gamma : {1.0, 1.5, 2.0}) {
        double theta = 1.0;
        for (long k = 1; k <= 10000; ++k) {
            theta = theta_next_root(gamma, theta);
            CHECK(theta <= theta_explicit(gamma, k) + 1e-15);
        }
    }
}

TEST_CASE("explicit sequence satisfies the stepsize condition to 1e-12") {
    // Checked in cross-multiplied form (1-t')t^g <= t'^g so both sides stay
    // O(1); dividing by t^g would amplify rounding past the slack at k=1e4.
    for (double gamma : {1.0, 1.5, 2.0}) {
        for (long k = 0; k < 10000; ++k) {
            const double t = theta_explicit(gamma, k);
            const double tn = theta_explicit(gamma, k + 1);
            CHECK((1.0 - tn) * std::pow(t, gamma) <=
                  std::pow(tn, gamma) + 1e-12);
        }
    }
}

TEST_CASE("gain-coupled equality frozen values") {
    // equal gains reduce to the plain root
    CHECK(theta_next_gain_equality(2.0, 1.0, 3.7, 3.7) ==
          doctest::Approx(theta_next_root(2.0, 1.0)).epsilon(1e-14));
    // G_k theta_k^2 = 0.25, gain up 1 -> 4: (1-t)/(4 t^2) = 4, root of
    // 16 t^2 + t - 1 = 0 -> (sqrt(65) - 1)/32; bisection agrees.
    const double up = theta_next_gain_equality(2.0, 0.5, 1.0, 4.0);
    CHECK(up == doctest::Approx((std::sqrt(65.0) - 1.0) / 32.0).epsilon(1e-13));
    CHECK(up == doctest::Approx(bisect_next_gain(2.0, 0.5, 1.0, 4.0)).epsilon(1e-12));
    CHECK(up == doctest::Approx(0.22069555463433).epsilon(1e-12));
    // gain down 4 -> 1: (1-t)/t^2 = 1 -> golden-ratio root
    const double down = theta_next_gain_equality(2.0, 0.5, 4.0, 1.0);
    CHECK(down ==
          doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-13));
    CHECK(down ==
          doctest::Approx(bisect_next_gain(2.0, 0.5, 4.0, 1.0)).epsilon(1e-12));
    // a growing gain makes the step more conservative
    CHECK(up < theta_next_root(2.0, 0.5));
    CHECK(down > theta_next_root(2.0, 0.5));
}

TEST_CASE("gain-coupled equality matches bisection on random sequences") {
    Rng rng(41);
    for (double gamma : {1.5, 2.0}) {
        double theta = 1.0, gain = 1.0;
        for (int k = 0; k < 100; ++k) {
            const double gain_next = gain * std::pow(1.5, rng.uniform() * 4 - 2);
            const double next =
                theta_next_gain_equality(gamma, theta, gain, gain_next);
            CHECK(next == doctest::Approx(bisect_next_gain(gamma, theta, gain,
                                                           gain_next))
                              .epsilon(1e-11));
            theta = next;
            gain = gain_next;
        }
    }
}

TEST_CASE("explicit gain rule frozen values") {
    // alpha = 1 advances gamma/(k+gamma) by one step
    CHECK(theta_next_gain_explicit(2.0, 1.0, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (long k = 0; k < 100; ++k)
        CHECK(theta_next_gain_explicit(2.0, theta_explicit(2.0, k), 1.0) ==
              doctest::Approx(theta_explicit(2.0, k + 1)).epsilon(1e-14));
    // direct substitution: 1/t' = (6/5)*2 + 1/5 = 2.6
    CHECK(theta_next_gain_explicit(3.0, 0.5, 2.0) ==
          doctest::Approx(5.0 / 13.0).epsilon(1e-14));
}

TEST_CASE("explicit gain rule reproduces gamma/(k+gamma) at alpha 1 to 1e-12") {
    for (double gamma : {1.5, 2.0}) {
        double theta = 1.0;
        for (long k = 1; k <= 10000; ++k) {
            theta = theta_next_gain_explicit(gamma, theta, 1.0);
            CHECK(std::abs(theta - theta_explicit(gamma, k)) <= 1e-12);
        }
    }
}

TEST_CASE("explicit gain rule satisfies the coupled condition as inequality") {
    Rng rng(43);
    for (double gamma : {1.5, 2.0, 2.5}) {
        double theta = 1.0, gain = 1.0;
        for (int k = 0; k < 200; ++k) {
            const double gain_next = gain * std::pow(1.5, rng.uniform() * 4 - 2);
            const double next =
                theta_next_gain_explicit(gamma, theta, gain_next / gain);
            // (1 - t')/(G' t'^g) <= 1/(G t^g), cross-multiplied
            CHECK((1.0 - next) * gain * std::pow(theta, gamma) <=
                  gain_next * std::pow(next, gamma) + 1e-12);
            theta = next;
            gain = gain_next;
        }
    }
}

TEST_CASE("accumulated theta weights equal theta_k^-gamma under the equality rule") {
    for (double gamma : {1.5, 2.0}) {
        double theta = 1.0;
        double acc = 0.0;
        for (long k = 0; k <= 1000; ++k) {
            acc += std::pow(theta, 1.0 - gamma);
            const double target = std::pow(theta, -gamma);
            CHECK(std::abs(acc - target) / target <= 1e-10);
            theta = theta_next_root(gamma, theta);
        }
    }
}

TEST_CASE("ThetaSequence enforces its mode and invariants") {
    ThetaSequence seq(ThetaMode::EqualityRoot, 2.0);
    CHECK(seq.current() == 1.0);
    seq.advance();
    CHECK(seq.current() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0));
    seq.reset();
    CHECK(seq.current() == 1.0);
    CHECK(seq.index() == 0);
    CHECK_THROWS_AS(seq.advance_with_gains(1.0, 2.0), ConfigError);
    ThetaSequence gains(ThetaMode::GainCoupled, 2.0);
    gains.advance_with_gains(1.0, 1.0);
    CHECK(gains.current() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0));
    CHECK_THROWS_AS(gains.advance(), ConfigError);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(theta_next_root(2.0, 0.0), ConfigError);
    CHECK_THROWS_AS(theta_next_root(2.0, 1.5), ConfigError);
    CHECK_THROWS_AS(theta_next_gain_equality(1.0, 0.5, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(theta_next_gain_equality(2.0, 0.5, -1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(theta_next_gain_explicit(2.0, 0.5, 0.0), ConfigError);
}

TEST_SUITE_END();
