#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "adjrobust/errors.hpp"
#include "adjrobust/instance.hpp"
#include "adjrobust/rng.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace adjrobust;

namespace {

std::set<std::vector<double>> as_set(const std::vector<Vector>& vs) {
  std::set<std::vector<double>> out;
  for (const Vector& v : vs) {
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = std::round(v[i] * 1e9) / 1e9;
    out.insert(r);
  }
  return out;
}

oracle::Mat with_nonnegativity(const Matrix& R, oracle::Vec& r) {
  oracle::Mat G = R.to_rows();
  for (std::size_t i = 0; i < R.cols(); ++i) {
    oracle::Vec row(R.cols(), 0.0);
    row[i] = -1.0;
    G.push_back(row);
    r.push_back(0.0);
  }
  return G;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Quantile by bisection on the erfc-based CDF.
double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("SplitMix64 substreams match an independent implementation") {
  // Values from a separate Python transcription of the documented rule.
  CHECK(rng::uniform(0, 0) == 0.6524484863740322);
  CHECK(rng::uniform(0, 1) == 0.27623358227789463);
  CHECK(rng::uniform(0, 2) == 0.9302874638535357);
  CHECK(rng::uniform(7, 0) == 0.7215081806049702);
  CHECK(rng::uniform(7, 2) == 0.6114022868410689);
  CHECK(rng::uniform(123456789, 1) == 0.3028437756632618);
}

TEST_CASE("inverse normal CDF matches a bisection quantile") {
  for (double p : {1e-12, 1e-6, 0.001, 0.02, 0.02425, 0.1, 0.3, 0.7, 0.9, 0.97575, 0.99, 1 - 1e-6}) {
    const double exact = normal_quantile(p);
    CHECK(std::abs(rng::inverse_normal_cdf(p) - exact) <= 1.15e-9 * std::abs(exact) + 1e-12);
  }
  CHECK(rng::inverse_normal_cdf(0.5) == 0.0);
}

TEST_CASE("gen_iid uniform: support, zero first stage, budget set") {
  const Instance inst = gen_iid(2, 2, RandomSpec::uniform(), 11);
  CHECK(inst.A.all_zero());
  CHECK(inst.c == Vector{0.0, 0.0});
  CHECK(inst.d_bar == 1.0);
  for (double b : inst.B.data()) CHECK((b >= 0.0 && b <= 1.0));
  CHECK(inst.uncertainty == budget_set(2));
  CHECK(inst.seed == 11u);
  CHECK_NOTHROW(inst.validate());
}

TEST_CASE("gen_iid is a pure function of its arguments") {
  for (auto spec : {RandomSpec::uniform(), RandomSpec::folded_normal(), RandomSpec::bernoulli(0.3)}) {
    CHECK(gen_iid(6, 4, spec, 99) == gen_iid(6, 4, spec, 99));
    CHECK_FALSE(gen_iid(6, 4, spec, 99).B == gen_iid(6, 4, spec, 100).B);
  }
  // Entry (i, j) only depends on the seed and i * n + j.
  const Instance small = gen_iid(2, 3, RandomSpec::uniform(), 5);
  CHECK(small.B(1, 2) == rng::uniform(5, 5));
}

TEST_CASE("gen_iid folded normal: nonnegative with mean sqrt(2/pi)") {
  const Instance inst = gen_iid(100, 100, RandomSpec::folded_normal(), 3);
  double sum = 0.0;
  for (double b : inst.B.data()) {
    CHECK(b >= 0.0);
    sum += b;
  }
  // Standard deviation of the mean is sqrt(1 - 2/pi) / 100 ~ 0.006.
  CHECK(std::abs(sum / 1e4 - std::sqrt(2.0 / std::numbers::pi)) < 0.02);
  CHECK(RandomSpec::folded_normal().mu == doctest::Approx(0.7978845608));
}

TEST_CASE("gen_iid Bernoulli: row frequencies inside the 3-sigma binomial band") {
  const Instance inst = gen_iid(50, 50, RandomSpec::bernoulli(0.5), 21);
  const double band = 3.0 * std::sqrt(0.25 / 50.0);
  double total = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    double ones = 0.0;
    for (double b : inst.B.row(i)) {
      CHECK((b == 0.0 || b == 1.0));
      ones += b;
    }
    CHECK(std::abs(ones / 50.0 - 0.5) <= band);
    total += ones;
  }
  CHECK(std::abs(total / 2500.0 - 0.5) <= 0.1);
}

TEST_CASE("Bernoulli parameter must lie in (0,1)") {
  CHECK_THROWS_AS(RandomSpec::bernoulli(0.0), InvariantViolation);
  CHECK_THROWS_AS(RandomSpec::bernoulli(1.0), InvariantViolation);
  CHECK_THROWS_AS(RandomSpec::bernoulli(-0.2), InvariantViolation);
  RandomSpec bad = RandomSpec::bernoulli(0.5);
  bad.p = 1.5;
  CHECK_THROWS_AS(gen_iid(2, 2, bad, 0), InvariantViolation);
}

TEST_CASE("gen_worst_case m=1 drops the duplicate origin") {
  const Instance inst = gen_worst_case(1, false);
  CHECK(inst.B(0, 0) == 1.0);
  REQUIRE(inst.uncertainty.is_vrep());
  CHECK(as_set(inst.uncertainty.v().vertices) == as_set({{0.0}, {1.0}}));
}

TEST_CASE("gen_worst_case m=4 deterministic") {
  const Instance inst = gen_worst_case(4, false);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(inst.B(i, j) == (i == j ? 1.0 : 0.5));
  const auto& vs = inst.uncertainty.v().vertices;
  CHECK(vs.size() == 9);
  CHECK(as_set(vs).count({0.0, 0.5, 0.5, 0.5}) == 1);
  CHECK_FALSE(inst.seed.has_value());
}

TEST_CASE("gen_worst_case randomized is dominated by the deterministic matrix") {
  const Instance det = gen_worst_case(4, false);
  const Instance rnd = gen_worst_case(4, true, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) {
        CHECK(rnd.B(i, j) == 1.0);
      } else {
        CHECK(rnd.B(i, j) >= 0.0);
        CHECK(rnd.B(i, j) <= 0.5);
      }
      CHECK(rnd.B(i, j) <= det.B(i, j));
    }
  CHECK(rnd.uncertainty == det.uncertainty);
}

TEST_CASE("budget_set shape") {
  const UncertaintySet u1 = budget_set(1);
  CHECK(u1.h().R == Matrix::from_rows({{1.0}, {1.0}}));
  CHECK(u1.h().r == Vector{1.0, 1.0});
  const UncertaintySet u4 = budget_set(4);
  CHECK(u4.h().R.rows() == 5);
  CHECK(u4.h().R.cols() == 4);
  CHECK(u4.h().r == Vector{1, 1, 1, 1, 2});
  CHECK(u4.num_rows() == 5);
}

TEST_CASE("budget_set(4) has the 11 vertices with at most two ones") {
  const UncertaintySet u = budget_set(4);
  const auto got = enumerate_vertices(u).v().vertices;
  CHECK(got.size() == 11);

  oracle::Vec r = u.h().r;
  const oracle::Mat G = with_nonnegativity(u.h().R, r);
  CHECK(as_set(got) == as_set(oracle::vertices(G, r)));

  std::vector<Vector> expected;
  for (int mask = 0; mask < 16; ++mask)
    if (__builtin_popcount(mask) <= 2) {
      Vector v(4);
      for (int i = 0; i < 4; ++i) v[i] = (mask >> i) & 1;
      expected.push_back(v);
    }
  CHECK(as_set(got) == as_set(expected));
}

TEST_CASE("enumerate_vertices on the box and the simplex") {
  const auto box = enumerate_vertices(UncertaintySet::hrep(Matrix::identity(2), {1, 1}));
  CHECK(as_set(box.v().vertices) == as_set({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  const auto simplex = enumerate_vertices(UncertaintySet::hrep(Matrix(1, 3, 1.0), {1}));
  CHECK(as_set(simplex.v().vertices) == as_set({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST_CASE("enumerate_vertices: feasibility, uniqueness, and hull equals the input set") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const std::size_t L = 1 + trial % 4;
    Matrix R(L + 1, m);
    Vector r(L + 1);
    for (std::size_t k = 0; k < L; ++k) {
      for (std::size_t i = 0; i < m; ++i) R(k, i) = u(gen) < 0.3 ? 0.0 : u(gen);
      r[k] = 0.5 + u(gen);
    }
    for (std::size_t i = 0; i < m; ++i) R(L, i) = 0.2 + u(gen);  // keeps the set bounded
    r[L] = 1.0 + u(gen);
    const UncertaintySet set = UncertaintySet::hrep(R, r);
    const auto vs = enumerate_vertices(set).v().vertices;

    oracle::Vec rr = r;
    const oracle::Mat G = with_nonnegativity(R, rr);
    CHECK(as_set(vs) == as_set(oracle::vertices(G, rr)));

    for (const Vector& v : vs) {
      std::size_t active = 0;
      for (std::size_t k = 0; k < G.size(); ++k) {
        const double s = oracle::dot(G[k], v);
        CHECK(s <= rr[k] + 1e-9);
        active += std::abs(s - rr[k]) <= 1e-9;
      }
      CHECK(active >= m);
    }
    for (int f = 0; f < 5; ++f) {
      Vector c(m);
      for (double& x : c) x = u(gen) * 2.0 - 1.0;
      CHECK(oracle::max_over(vs, c) == doctest::Approx(max_linear(set, c)).epsilon(1e-9));
    }
  }
}

TEST_CASE("vertex enumeration cap") {
  CHECK_THROWS_AS(enumerate_vertices(budget_set(13)), CapExceededError);
  CHECK_NOTHROW(enumerate_vertices(budget_set(13), 13));
}

TEST_CASE("hull_facets recovers an H-representation of the same polytope") {
  for (std::size_t m : {1u, 2u, 3u, 5u}) {
    const Instance wc = gen_worst_case(m, false);
    const auto& pts = wc.uncertainty.v().vertices;
    const Polyhedron p = hull_facets(pts);
    // At m = 2 the points nu_i lie on the edges [0, e_j] and are not extreme.
    const auto extreme = as_set(vertices(p));
    for (const auto& v : extreme) CHECK(as_set(pts).count(v) == 1);
    CHECK(extreme.size() == (m == 2 ? 3 : pts.size()));
    for (const Vector& pt : pts)
      for (std::size_t k = 0; k < p.G.rows(); ++k) CHECK(dot(p.G.row(k), pt) <= p.g[k] + 1e-9);
    std::mt19937_64 gen(m);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int f = 0; f < 10; ++f) {
      Vector c(m);
      for (double& x : c) x = u(gen);
      CHECK(max_linear(p, c) == doctest::Approx(oracle::max_over(pts, c)).epsilon(1e-9));
    }
  }
  const Polyhedron budget = hull_facets(enumerate_vertices(budget_set(3)).v().vertices);
  CHECK(as_set(vertices(budget)) == as_set(enumerate_vertices(budget_set(3)).v().vertices));
  const Polyhedron origin = hull_facets({{0.0, 0.0}});
  CHECK(as_set(vertices(origin)) == as_set({{0.0, 0.0}}));
  CHECK_THROWS_AS(hull_facets({{0.0, 0.0}, {1.0, 1.0}}), InvariantViolation);
}

TEST_CASE("max_coordinate examples") {
  CHECK(max_coordinate(budget_set(4), 1) == doctest::Approx(1.0));
  CHECK(max_coordinate(UncertaintySet::hrep(Matrix(1, 3, 1.0), {1}), 2) == doctest::Approx(1.0));
  const Instance wc = gen_worst_case(4, false);
  CHECK(max_coordinate(dualized_set(wc.B, wc.d_bar), 1) == doctest::Approx(1.0));
  CHECK(max_coordinate(wc.uncertainty, 0) == 1.0);
  CHECK_THROWS_AS(max_coordinate(Polyhedron{Matrix::from_rows({{1.0, -1.0}}), {1.0}}, 1), UnboundedSetError);
}

TEST_CASE("uncertainty set invariants") {
  CHECK_THROWS_AS(UncertaintySet::hrep(Matrix::from_rows({{1.0, 0.0}}), {1.0}), UnboundedSetError);
  CHECK_THROWS_AS(UncertaintySet::hrep(Matrix::from_rows({{-1.0}}), {1.0}), InvariantViolation);
  CHECK_THROWS_AS(UncertaintySet::hrep(Matrix::from_rows({{1.0}}), {-1.0}), InvariantViolation);
  CHECK_THROWS_AS(UncertaintySet::vrep({}), InvariantViolation);
  CHECK_THROWS_AS(UncertaintySet::vrep({{0.0, 1.0}, {0.0, 1.0 + 1e-10}}), InvariantViolation);
  CHECK_THROWS_AS(UncertaintySet::vrep({{0.0, -1.0}}), InvariantViolation);
  CHECK_NOTHROW(UncertaintySet::vrep({{0.0, 1.0}, {0.0, 1.0 + 1e-8}}));
  // U = {0} as an H-representation.
  const auto zero = UncertaintySet::hrep(Matrix::identity(3), Vector(3, 0.0));
  CHECK(as_set(enumerate_vertices(zero).v().vertices) == as_set({{0, 0, 0}}));
}

TEST_CASE("instance JSON round trip is exact") {
  for (const Instance& inst : {gen_worst_case(2, false), gen_worst_case(3, true, 5),
                               gen_iid(3, 4, RandomSpec::folded_normal(), 1ULL << 63),
                               gen_iid(2, 2, RandomSpec::uniform(), 0)}) {
    const Instance back = instance_from_json(instance_to_json(inst));
    CHECK(back == inst);
  }
}

TEST_CASE("instance JSON errors") {
  const std::string good = instance_to_json(gen_worst_case(2, false));

  std::string neg = good;
  const auto pos = neg.find("\"B\"");
  REQUIRE(pos != std::string::npos);
  neg.replace(neg.find("1.0", pos), 3, "-1.0");
  try {
    instance_from_json(neg);
    FAIL("expected an invariant violation");
  } catch (const InvariantViolation& e) {
    CHECK(e.invariant() == "B nonnegative");
  }

  auto doc = nlohmann::json::parse(instance_to_json(gen_iid(2, 2, RandomSpec::uniform(), 1)));
  doc.erase("uncertainty");
  const std::string missing = doc.dump();
  try {
    instance_from_json(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("uncertainty") != std::string::npos);
  }

  try {
    instance_from_json("{\n  \"m\": 2,\n  \"n\": ]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(instance_from_json(R"({"m":2})"), ParseError);
}
