#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "lipfree/cover.hpp"

using namespace lipfree;
using testing::Q;

namespace {

// Stage-k middle-thirds intervals, left to right.
std::vector<std::pair<Rational, Rational>> thirds_intervals(int k) {
  std::vector<std::pair<Rational, Rational>> cur{{Rational(0), Rational(1)}};
  for (int s = 0; s < k; ++s) {
    std::vector<std::pair<Rational, Rational>> next;
    for (auto [a, b] : cur) {
      Rational w = (b - a) / 3;
      next.emplace_back(a, a + w);
      next.emplace_back(b - w, b);
    }
    cur = std::move(next);
  }
  return cur;
}

// Brute force over all set partitions (closed_sets) at one radius.
bool partition_exists(const MetricSpace<Rational>& m, const Rational& r, const Rational& rho) {
  const std::size_t n = m.size();
  std::vector<std::size_t> block(n, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) -> bool {
    if (i == n) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (block[a] == block[b] && m(a, b) > r) return false;
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (block[a] != block[b] && m(z, a) <= rho * r && m(z, b) <= rho * r) return false;
      return true;
    }
    for (std::size_t c = 0; c <= used; ++c) {
      block[i] = c;
      if (rec(i + 1, std::max(used, c + 1))) return true;
    }
    return false;
  };
  return rec(0, 0);
}

}  // namespace

TEST_SUITE("cover") {
  TEST_CASE("two points far apart are covered by singletons") {
    auto m = make_line_space<Rational>("two", {"0", "x"}, {0, 1}, 0);
    for (auto variant : {CoverVariant::balls, CoverVariant::closed_sets}) {
      auto report = check_cover_condition<Rational>(*m, Q("1/10"), Rational(2), variant);
      CHECK(report.verdict == CoverVerdict::satisfied);
      CHECK(report.blocks.size() == 2);
    }
  }

  TEST_CASE("one point is vacuous") {
    auto m = make_line_space<Rational>("one", {"0"}, {0}, 0);
    auto report = check_cover_condition<Rational>(*m, Q("1/10"), Rational(2), CoverVariant::balls);
    CHECK(report.verdict == CoverVerdict::satisfied);
  }

  TEST_CASE("stage-3 middle-thirds endpoints with the 8 stage intervals") {
    std::vector<Rational> pos;
    std::vector<std::string> labels;
    for (auto [a, b] : thirds_intervals(3)) {
      pos.push_back(a);
      pos.push_back(b);
    }
    for (std::size_t i = 0; i < pos.size(); ++i) labels.push_back("e" + std::to_string(i));
    auto m = make_line_space<Rational>("c3", labels, pos, 0);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < 8; ++i) blocks.push_back({2 * i, 2 * i + 1});
    CHECK(verify_cover<Rational>(*m, blocks, Q("1/3"), CoverVariant::closed_sets));
    auto report = check_cover_condition<Rational>(*m, Q("1/27"), Q("1/3"), CoverVariant::closed_sets, Q("1/27"));
    CHECK(report.verdict == CoverVerdict::satisfied);
    CHECK(verify_cover<Rational>(*m, report.blocks, Q("1/3"), CoverVariant::closed_sets));
    // A wider enlargement merges neighbouring intervals.
    CHECK_FALSE(verify_cover<Rational>(*m, blocks, Rational(2), CoverVariant::closed_sets));
  }

  TEST_CASE("resolution floor makes the question non-trivial") {
    // Evenly spaced points: any block is one point or spans a gap; with
    // rho = 2 neighbouring singletons collide once r reaches the spacing.
    auto m = make_line_space<Rational>("even", {"0", "a", "b", "c"}, {0, 1, 2, 3}, 0);
    auto loose = check_cover_condition<Rational>(*m, Q("1/4"), Rational(2), CoverVariant::closed_sets);
    CHECK(loose.verdict == CoverVerdict::satisfied);
    auto tight = check_cover_condition<Rational>(*m, Rational(1), Rational(2), CoverVariant::closed_sets, Rational(1));
    CHECK(tight.verdict == CoverVerdict::refuted);
  }

  TEST_CASE("closed-set verdicts agree with partition brute force") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      auto m = random_space<Rational>(seed, 6, RandomGenerator::shortestpath);
      for (const char* r : {"1/2", "1", "2", "3"}) {
        const Rational radius = Q(r);
        for (const char* rho : {"1/2", "1", "2"}) {
          auto report = check_cover_condition<Rational>(*m, radius, Q(rho), CoverVariant::closed_sets, radius);
          CHECK((report.verdict == CoverVerdict::satisfied) == partition_exists(*m, radius, Q(rho)));
          if (report.verdict == CoverVerdict::satisfied) {
            CHECK(verify_cover<Rational>(*m, report.blocks, Q(rho), CoverVariant::closed_sets));
          }
        }
      }
    }
  }

  TEST_CASE("ball covers found are valid and large spaces are flagged") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto m = random_space<Rational>(seed, 8, RandomGenerator::shortestpath);
      auto report = check_cover_condition<Rational>(*m, Rational(2), Rational(1), CoverVariant::balls, Rational(1));
      CHECK(report.exhaustive);
      if (report.verdict == CoverVerdict::satisfied) {
        CHECK(verify_cover<Rational>(*m, report.blocks, Rational(1), CoverVariant::balls, report.centers,
                                     report.radius));
      } else {
        CHECK(report.verdict == CoverVerdict::refuted);
      }
    }
    auto big = random_space<Rational>(3, 20, RandomGenerator::shortestpath);
    auto report = check_cover_condition<Rational>(*big, Rational(8), Rational(8), CoverVariant::balls, Rational(8));
    CHECK_FALSE(report.exhaustive);
    CHECK(report.verdict != CoverVerdict::refuted);
  }
}
