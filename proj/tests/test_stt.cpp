#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynadetect/stt.hpp"
#include "test_support.hpp"

using namespace dynadetect;

namespace {

// Source reading from a fixed vector.
struct VectorSource {
    const std::vector<double>* data;
    std::size_t pos = 0;
    double operator()() { return (*data)[pos++]; }
};

} // namespace

TEST_CASE("c_factor spot values") {
    const double e = std::exp(1.0);
    CHECK(c_factor(std::exp(-e)) == doctest::Approx(2.0 * (1.0 + 1.0 / e)).epsilon(1e-12));
    CHECK(c_factor(0.001) == doctest::Approx(2.5595579622794171).epsilon(1e-12));
    CHECK(c_factor(1e-12) < c_factor(1e-6)); // decreasing toward 2 in the tail
}

TEST_CASE("c_factor stays within its proven band") {
    const double upper = 2.0 * (1.0 + std::exp(-1.0));
    for (double x = 1e-15; x < std::exp(-1.0); x *= 3.7) {
        const double c = c_factor(x);
        CHECK(c > 2.0);
        CHECK(c <= upper + 1e-12);
    }
}

TEST_CASE("c_factor domain errors") {
    CHECK_THROWS_AS(c_factor(std::exp(-1.0)), std::domain_error);
    CHECK_THROWS_AS(c_factor(0.5), std::domain_error);
    CHECK_THROWS_AS(c_factor(0.0), std::domain_error);
    CHECK_THROWS_AS(c_factor(-0.1), std::domain_error);
}

TEST_CASE("schedule: T=200, eps=0.1") {
    const SttSchedule sched = make_schedule(200, 0.1);
    CHECK(sched.k == 4);
    CHECK(sched.c_val == doctest::Approx(2.5595579622794171).epsilon(1e-12));
    CHECK(sched.thresholds[0] == doctest::Approx(4.6075048340575703).epsilon(1e-12));
    CHECK(sched.thresholds[3] == doctest::Approx(2.3037524170287852).epsilon(1e-12));
}

TEST_CASE("schedule: T=14768, eps=0.05 has k=8") {
    CHECK(make_schedule(14768, 0.05).k == 8);
}

TEST_CASE("schedule: ladder identities") {
    for (std::uint64_t T : {6u, 20u, 200u, 5000u, 14768u}) {
        for (double eps : {0.01, 0.1, 0.3}) {
            const SttSchedule sched = make_schedule(T, eps);
            REQUIRE(sched.thresholds.size() == sched.k);
            const double c0 = sched.thresholds[0];
            for (std::size_t j = 0; j < sched.k; ++j) {
                CHECK(sched.thresholds[j] > 0.0);
                if (j > 0) CHECK(sched.thresholds[j] < sched.thresholds[j - 1]);
                // t_j * sqrt(j) is constant across the ladder
                CHECK(sched.thresholds[j] * std::sqrt(static_cast<double>(j + 1)) ==
                      doctest::Approx(c0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("schedule rejects T < 6") {
    CHECK_THROWS_AS(make_schedule(5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0, 0.1), std::invalid_argument);
}

TEST_CASE("schedule json dump") {
    const std::string js = schedule_to_json(make_schedule(20, 0.2));
    CHECK(js.find("\"T\":20") != std::string::npos);
    CHECK(js.find("\"k\":2") != std::string::npos);
    CHECK(js.find("\"thresholds\":[") != std::string::npos);
}

TEST_CASE("run_stt: immediate signal") {
    const SttSchedule sched = make_schedule(200, 0.1);
    std::vector<double> obs(10, sched.thresholds[0] + 1.0);
    VectorSource src{&obs};
    const SttRunRecord rec = run_stt(sched, src, 100);
    CHECK(rec.verdict == SttVerdict::Signal);
    CHECK(rec.n_obs == 1);
}

TEST_CASE("run_stt: immediate no-signal on zeros") {
    const SttSchedule sched = make_schedule(200, 0.1);
    std::vector<double> obs(10, 0.0);
    VectorSource src{&obs};
    const SttRunRecord rec = run_stt(sched, src, 100);
    CHECK(rec.verdict == SttVerdict::NoSignal);
    CHECK(rec.n_obs == 1);
}

TEST_CASE("run_stt: corridor value truncates on a short budget, decides at k") {
    const SttSchedule sched = make_schedule(200, 0.1); // thresholds 4.61 .. 2.30
    std::vector<double> obs(10, 2.5);                  // between t_k and every t_j for j < k
    {
        VectorSource src{&obs};
        const SttRunRecord rec = run_stt(sched, src, 2);
        CHECK(rec.verdict == SttVerdict::BudgetTruncated);
        CHECK(rec.n_obs == 2);
    }
    {
        VectorSource src{&obs};
        const SttRunRecord rec = run_stt(sched, src, 100);
        // at j = k the corridor closes: 2.5 > t_4
        CHECK(rec.verdict == SttVerdict::Signal);
        CHECK(rec.n_obs == sched.k);
    }
}

TEST_CASE("run_stt: rejects zero budget") {
    const SttSchedule sched = make_schedule(20, 0.2);
    std::vector<double> obs(5, 0.0);
    VectorSource src{&obs};
    CHECK_THROWS_AS(run_stt(sched, src, 0), std::invalid_argument);
}

TEST_CASE("run_stt: deterministic on identical inputs") {
    const SttSchedule sched = make_schedule(50, 0.1);
    Rng rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> obs(sched.k);
        for (double& v : obs) v = rng.normal() + 1.5;
        VectorSource a{&obs}, b{&obs};
        const SttRunRecord ra = run_stt(sched, a, 100);
        const SttRunRecord rb = run_stt(sched, b, 100);
        CHECK(ra.verdict == rb.verdict);
        CHECK(ra.n_obs == rb.n_obs);
        CHECK(ra.running_means == rb.running_means);
    }
}

TEST_CASE("run_stt: terminates within min(k, budget) and always decides at k") {
    const SttSchedule sched = make_schedule(300, 0.05);
    Rng rng(9);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<double> obs(sched.k);
        for (double& v : obs) v = 3.0 * rng.normal();
        const std::uint64_t budget = 1 + rng.uniform_below(sched.k + 3);
        VectorSource src{&obs};
        const SttRunRecord rec = run_stt(sched, src, budget);
        CHECK(rec.n_obs <= std::min<std::uint64_t>(sched.k, budget));
        if (budget >= sched.k) {
            CHECK(rec.verdict != SttVerdict::BudgetTruncated);
        }
    }
}

TEST_CASE("run_stt: adding a positive constant never demotes a Signal") {
    const SttSchedule sched = make_schedule(80, 0.15);
    Rng rng(13);
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<double> base(sched.k);
        for (double& v : base) v = 2.0 * rng.normal() + 1.0;
        const double shift = 0.1 + rng.uniform01();
        std::vector<double> shifted = base;
        for (double& v : shifted) v += shift;

        VectorSource sa{&base}, sb{&shifted};
        const SttRunRecord ra = run_stt(sched, sa, 100);
        const SttRunRecord rb = run_stt(sched, sb, 100);
        if (ra.verdict == SttVerdict::Signal) {
            CHECK(rb.verdict == SttVerdict::Signal);
            CHECK(rb.n_obs <= ra.n_obs);
        }
        if (rb.verdict == SttVerdict::NoSignal) {
            CHECK(ra.verdict == SttVerdict::NoSignal);
            CHECK(ra.n_obs <= rb.n_obs);
        }
    }
}

TEST_CASE("lemma 1(i) at desk scale: null signal rate below eps/T") {
    const SttSchedule sched = make_schedule(20, 0.2);
    Rng rng(2718);
    const std::uint64_t runs = 10000;
    std::uint64_t signals = 0;
    for (std::uint64_t r = 0; r < runs; ++r) {
        const SttRunRecord rec = run_stt(sched, [&rng] { return rng.normal(); }, 100);
        if (rec.verdict == SttVerdict::Signal) ++signals;
    }
    const double rate = static_cast<double>(signals) / static_cast<double>(runs);
    const double bound = 0.2 / 20.0;
    CHECK(rate <= bound + 3.0 * binomial_se(bound, runs));
}

TEST_CASE("lemma 1(ii) at desk scale: miss rate below eps/3") {
    const SttSchedule sched = make_schedule(20, 0.2);
    const double extra = std::sqrt(2.0 * std::log(4.0 / 0.2));
    Rng rng(314159);
    for (std::size_t j_case : {std::size_t{0}, sched.k - 1}) {
        const double mu = sched.thresholds[j_case] + extra;
        const std::uint64_t runs = 10000;
        std::uint64_t misses = 0;
        for (std::uint64_t r = 0; r < runs; ++r) {
            const SttRunRecord rec = run_stt(sched, [&] { return mu + rng.normal(); }, 100);
            if (rec.verdict == SttVerdict::NoSignal) ++misses;
        }
        const double rate = static_cast<double>(misses) / static_cast<double>(runs);
        const double bound = 0.2 / 3.0;
        CHECK(rate <= bound + 3.0 * binomial_se(bound, runs));
    }
}
