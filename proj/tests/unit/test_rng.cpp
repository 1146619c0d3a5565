#include <doctest.h>

#include <cmath>
#include <vector>

#include "urnsim/rng.hpp"
#include "urnsim/stats.hpp"

using namespace urnsim;

TEST_CASE("streams replay bit-identically from the same seed") {
    RandomStream a = RandomStream::from_seed(42);
    RandomStream b = RandomStream::from_seed(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("draw n is addressable without consuming the stream") {
    RandomStream s = RandomStream::from_seed(7);
    const std::uint64_t direct = s.at(5);
    for (int i = 0; i < 5; ++i) s.next_u64();
    CHECK(s.next_u64() == direct);
}

TEST_CASE("child streams differ from parents and from each other") {
    RandomStream parent = RandomStream::from_seed(1);
    RandomStream c0 = parent.child(0);
    RandomStream c1 = parent.child(1);
    CHECK(c0.key() != c1.key());
    CHECK(c0.key() != parent.key());
    CHECK(c0.at(0) != c1.at(0));
    // Same tag twice is the same stream.
    CHECK(parent.child(0).key() == c0.key());
}

TEST_CASE("unit draws are uniform on [0,1)") {
    RandomStream s = RandomStream::from_seed(1234);
    const int n = 100000;
    std::vector<double> u(n);
    for (double& v : u) {
        v = s.next_unit();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
    // Mean within 5 standard errors of 1/2 (SE = 1/sqrt(12 n)).
    const Moments m = empirical_moments(u);
    CHECK(std::abs(m.mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
    const double p = ks_test_uniform(u);
    CHECK(p > 1e-4);
}

TEST_CASE("sibling streams look independent") {
    RandomStream parent = RandomStream::from_seed(99);
    RandomStream a = parent.child(0);
    RandomStream b = parent.child(1);
    const int n = 50000;
    double sum_ab = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.next_unit();
        const double y = b.next_unit();
        sum_a += x;
        sum_b += y;
        sum_ab += x * y;
    }
    const double cov = sum_ab / n - (sum_a / n) * (sum_b / n);
    const double corr = cov * 12.0;  // Var(U) = 1/12
    CHECK(std::abs(corr) < 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bernoulli frequency tracks p") {
    RandomStream s = RandomStream::from_seed(5);
    const int n = 100000;
    const double p = 0.3;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += s.bernoulli(p) ? 1 : 0;
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - p) < 5.0 * se);
}

TEST_CASE("unit_open stays in (0,1]") {
    RandomStream s = RandomStream::from_seed(8);
    for (int i = 0; i < 10000; ++i) {
        const double v = s.next_unit_open();
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
    }
}
