#include "bregman/harness.hpp"

#include "bregman/errors.hpp"
#include "bregman/instance.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bregman;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

SolverTrace synthetic_power_trace(double coeff, double power, long n) {
    SolverTrace t;
    t.algorithm = "synthetic";
    for (long k = 0; k <= n; ++k) {
        TraceRow r;
        r.k = k;
        r.F = k == 0 ? coeff * 10 : coeff * std::pow(double(k), power);
        t.rows.push_back(r);
    }
    return t;
}

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("weighted geometric mean of gains") {
    const double ones[] = {1.0, 1.0, 1.0};
    CHECK(geo_mean_gain(ones, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double two[] = {4.0, 1.0};
    CHECK(geo_mean_gain(two, 2.0) ==
          doctest::Approx(std::pow(16.0, 1.0 / 3.0)).epsilon(1e-14));
    const double three[] = {1.0, 8.0, 8.0};
    CHECK(geo_mean_gain(three, 2.0) ==
          doctest::Approx(std::pow(64.0, 0.25)).epsilon(1e-14));
    const double bad[] = {1.0, 0.0};
    CHECK_THROWS_AS(geo_mean_gain(bad, 2.0), ConfigError);
    // log-space evaluation agrees with the direct product on benign input
    const double seq[] = {0.5, 2.0, 1.5, 0.25};
    const double direct =
        std::pow(std::pow(0.5, 2.0) * 2.0 * 1.5 * 0.25, 1.0 / (3.0 + 2.0));
    CHECK(geo_mean_gain(seq, 2.0) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("rate-slope fit recovers exact power laws") {
    SolverTrace t1 = synthetic_power_trace(100.0, -1.0, 2000);
    CHECK(fit_rate_slope(t1, 0.0, 200, 2000) ==
          doctest::Approx(-1.0).epsilon(1e-10));
    SolverTrace t2 = synthetic_power_trace(100.0, -2.0, 2000);
    CHECK(fit_rate_slope(t2, 0.0, 200, 2000) ==
          doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("rate-slope fit rejects bad windows") {
    SolverTrace t = synthetic_power_trace(1.0, -1.0, 100);
    CHECK_THROWS_AS(fit_rate_slope(t, 0.0, 10, 5), ConfigError);
    CHECK_THROWS_AS(fit_rate_slope(t, 0.0, 0, 50), ConfigError);
    CHECK_THROWS_AS(fit_rate_slope(t, 0.0, 10, 500), ConfigError);
    // a window that reaches the gap floor is an error
    CHECK_THROWS_AS(fit_rate_slope(t, 1.0 / 50.0, 10, 100), ConfigError);
}

TEST_CASE("trace csv writes the documented schema and round-trips") {
    auto path = temp_path("bregman_trace_rt.csv");
    Instance inst = gen_doptimal(6, 14, 5);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::ABPG_g;
    cfg.max_iter = 25;
    SolverTrace t = run(inst.problem, cfg, inst.x0);
    write_trace_csv(t, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,F,gap,theta,gamma,G,Ghat,inner,grad_calls,seconds");
    std::string second;
    std::getline(in, second);
    CHECK(second.find(",,") != std::string::npos); // gap empty without F*
    in.close();
    SolverTrace r = read_trace_csv(path.string());
    REQUIRE(r.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(r.rows[i].k == t.rows[i].k);
        CHECK(r.rows[i].F == t.rows[i].F); // 17 digits round-trip exactly
        const bool theta_same =
            (std::isnan(r.rows[i].theta) && std::isnan(t.rows[i].theta)) ||
            r.rows[i].theta == t.rows[i].theta;
        CHECK(theta_same);
        CHECK(r.rows[i].grad_calls == t.rows[i].grad_calls);
    }
    std::filesystem::remove(path);
}

TEST_CASE("empty trace writes a header-only file") {
    auto path = temp_path("bregman_trace_empty.csv");
    write_trace_csv(SolverTrace{}, path.string());
    std::ifstream in(path);
    std::string header, rest;
    CHECK(std::getline(in, header));
    CHECK(!std::getline(in, rest));
    std::filesystem::remove(path);
}

TEST_CASE("csv reader rejects malformed files") {
    auto path = temp_path("bregman_trace_bad.csv");
    {
        std::ofstream out(path);
        out << "not,a,trace\n";
    }
    CHECK_THROWS_AS(read_trace_csv(path.string()), ParseError);
    CHECK_THROWS_AS(read_trace_csv("/nonexistent/trace.csv"), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("certificates replay the rate bound from recorded data") {
    Instance inst = gen_doptimal(10, 30, 9);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::ABPG_g;
    cfg.max_iter = 300;
    SolverTrace t = run(inst.problem, cfg, inst.x0);
    SolverTrace ref = reference_run(inst, 2.0, 3000);
    double fstar = std::min(ref.best_F, t.best_F);
    const Vector& xhat = ref.best_F <= t.best_F ? ref.best_x : t.best_x;
    auto certs = certify_trace(t, inst.problem, inst.x0, xhat, fstar, 2.0);
    REQUIRE(certs.size() == t.rows.size());
    CHECK(std::isnan(certs[0].theory_bound)); // no steps yet
    for (const Certificate& c : certs) {
        CHECK(c.observed_gap >= -1e-8 * std::abs(fstar));
        if (!std::isnan(c.theory_bound)) {
            CHECK(c.geo_mean_gain > 0.0);
            CHECK(c.theory_bound >= c.observed_gap - 1e-8);
        }
        if (!std::isnan(c.slope)) CHECK(c.slope < 0.0);
    }
    auto path = temp_path("bregman_cert.csv");
    write_certificates_csv(certs, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,gap,Gbar,bound,slope");
    std::filesystem::remove(path);
}

TEST_CASE("certify rejects a trace inconsistent with its optimum") {
    Instance inst = gen_doptimal(6, 14, 9);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::BPG;
    cfg.max_iter = 10;
    SolverTrace t = run(inst.problem, cfg, inst.x0);
    const double fake_fstar = t.best_F + 10.0; // above every recorded F
    CHECK_THROWS_AS(certify_trace(t, inst.problem, inst.x0, inst.x0, fake_fstar,
                                  2.0),
                    ConfigError);
}

TEST_CASE("compare produces consistent summaries and files") {
    Instance inst = gen_doptimal(8, 20, 21);
    CompareOptions opts;
    opts.algos = {algo_spec_from_string("bpg"), algo_spec_from_string("abpg"),
                  algo_spec_from_string("abpg-g"),
                  algo_spec_from_string("abpg-g-rs")};
    opts.base.max_iter = 150;
    opts.base.gamma = 2.0;
    CompareResult res = run_compare(inst, opts);
    REQUIRE(res.algos.size() == 4);
    CHECK(res.fstar <= res.algos[0].trace.best_F + 1e-15);
    for (const AlgoResult& ar : res.algos) {
        CHECK(ar.final_gap >= -1e-12);
        CHECK(ar.trace.rows.size() == 151);
    }
    // accelerated beats plain at equal budget on this instance
    CHECK(res.algos[1].final_gap <= res.algos[0].final_gap);

    auto dir = temp_path("bregman_cmp_out");
    std::filesystem::create_directories(dir);
    auto out = dir / "cmp.csv";
    write_compare_outputs(res, inst, out.string());
    CHECK(std::filesystem::exists(dir / "cmp.csv"));
    CHECK(std::filesystem::exists(dir / "cmp-bpg.csv"));
    CHECK(std::filesystem::exists(dir / "cmp-abpg.csv"));
    CHECK(std::filesystem::exists(dir / "cmp-abpg-g.csv"));
    CHECK(std::filesystem::exists(dir / "cmp-abpg-g-rs.csv"));
    CHECK(std::filesystem::exists(dir / "cmp-summary.json"));
    std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
