#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "rgls/regret.hpp"
#include "rgls/tour.hpp"
#include "test_support.hpp"

namespace rgls {
namespace {

std::vector<int> as_vec(const Tour& t) { return {t.order().begin(), t.order().end()}; }

TEST(Tour, RejectsInvalidPermutations) {
  EXPECT_THROW(Tour({0, 1}), ValidationError);
  EXPECT_THROW(Tour({0, 1, 1}), ValidationError);
  EXPECT_THROW(Tour({0, 1, 3}), ValidationError);
  EXPECT_NO_THROW(Tour({2, 0, 1}));
}

TEST(TourCost, UnitSquarePerimeter) {
  const auto sq = testing::unit_square();
  EXPECT_DOUBLE_EQ(tour_cost(sq, Tour({0, 1, 2, 3})), 4.0);
  EXPECT_DOUBLE_EQ(tour_cost(DistanceMatrix(sq), Tour({0, 1, 2, 3})), 4.0);
}

TEST(TourCost, WrongLength) {
  const DistanceMatrix w(testing::unit_square());
  EXPECT_THROW(tour_cost(w, Tour({0, 1, 2})), ValidationError);
}

TEST(TourCost, InvariantUnderRotationAndReversal) {
  const auto inst = generate_random(12, 5);
  const DistanceMatrix w(inst);
  std::vector<int> o = {3, 7, 1, 0, 11, 5, 9, 2, 4, 10, 8, 6};
  const double c = tour_cost(w, Tour(o));
  for (int r = 0; r < 12; ++r) {
    std::rotate(o.begin(), o.begin() + 1, o.end());
    EXPECT_NEAR(tour_cost(w, Tour(o)), c, 1e-12);
    std::vector<int> rev(o.rbegin(), o.rend());
    EXPECT_NEAR(tour_cost(w, Tour(rev)), c, 1e-12);
  }
}

TEST(TourCost, OptimalTourMatchesEnumeration) {
  const auto inst = generate_random(8, 21);
  const auto e = testing::enumerate_all(inst);
  const auto hk = exact_optimum_heldkarp(DistanceMatrix(inst));
  EXPECT_NEAR(tour_cost(inst, hk.tour), e.optimum, 1e-12);
  EXPECT_NEAR(tour_cost(inst, Tour(e.best)), e.optimum, 1e-12);
}

TEST(Delta, IdentityMovesAreZero) {
  const DistanceMatrix w(generate_random(9, 2));
  const auto t = Tour::identity(9);
  EXPECT_EQ(delta_two_opt(w, t, 3, 4), 0.0);
  EXPECT_EQ(delta_two_opt(w, t, 0, 8), 0.0);
  EXPECT_EQ(delta_relocate(w, t, 4, 4), 0.0);
  EXPECT_EQ(delta_relocate(w, t, 4, 3), 0.0);
  EXPECT_EQ(apply_move(t, {MoveKind::relocate, 4, 3}), t);
  EXPECT_EQ(apply_move(t, {MoveKind::two_opt, 2, 3}), t);
}

TEST(Delta, CrossedSquare) {
  const auto sq = testing::unit_square();
  const DistanceMatrix w(sq);
  const Tour crossed({0, 2, 1, 3});
  const double d = delta_two_opt(w, crossed, 0, 2);
  EXPECT_NEAR(d, 2.0 - 2.0 * std::sqrt(2.0), 1e-12);
  const auto fixed = apply_move(crossed, {MoveKind::two_opt, 0, 2});
  EXPECT_NEAR(testing::raw_cycle(sq, as_vec(fixed)) - testing::raw_cycle(sq, as_vec(crossed)), d, 1e-12);
  EXPECT_NEAR(tour_cost(w, fixed), 4.0, 1e-12);
}

TEST(Delta, RelocateInteriorNodeOfPath) {
  // Points on a line visited 0 2 1 3: moving node 2 after node 1 gives 0 1 2 3.
  const Instance line("line", {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const DistanceMatrix w(line);
  const Tour t({0, 2, 1, 3});
  const double d = delta_relocate(w, t, 1, 2);
  const auto moved = apply_move(t, {MoveKind::relocate, 1, 2});
  EXPECT_EQ(as_vec(moved), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_NEAR(d, testing::raw_cycle(line, as_vec(moved)) - testing::raw_cycle(line, as_vec(t)), 1e-12);
  EXPECT_LT(d, 0.0);
}

TEST(Delta, RandomMovesMatchRecomputation) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 30);
    const auto inst = generate_random(n, rng());
    const DistanceMatrix w(inst);
    std::vector<int> o(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
    const Tour t(o);
    const Move m{trial % 2 ? MoveKind::two_opt : MoveKind::relocate, static_cast<int>(rng() % n),
                 static_cast<int>(rng() % n)};
    const Move mm = m.kind == MoveKind::two_opt ? Move{m.kind, std::min(m.a, m.b), std::max(m.a, m.b)} : m;
    const double before = testing::raw_cycle(inst, o);
    const double after = testing::raw_cycle(inst, as_vec(apply_move(t, mm)));
    EXPECT_NEAR(after - before, move_delta(w, t, mm), 1e-9 * std::max(1.0, before)) << "trial " << trial;
  }
}

TEST(ApplyMove, ManyRandomMovesKeepPermutation) {
  std::mt19937_64 rng(7);
  const int n = 40;
  auto t = Tour::identity(n);
  for (int k = 0; k < 10000; ++k) {
    const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    t.apply(k % 2 ? Move{MoveKind::two_opt, std::min(a, b), std::max(a, b)} : Move{MoveKind::relocate, a, b});
  }
  std::vector<int> o = as_vec(t);
  std::sort(o.begin(), o.end());
  for (int v = 0; v < n; ++v) {
    EXPECT_EQ(o[v], v);
    EXPECT_EQ(t.at(t.position(v)), v);
  }
}

TEST(ApplyMove, TwoOptIsInvolution) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const int n = 6 + static_cast<int>(rng() % 20);
    std::vector<int> o(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
    const Tour t(o);
    const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    const Move m{MoveKind::two_opt, std::min(a, b), std::max(a, b)};
    EXPECT_EQ(apply_move(apply_move(t, m), m), t);
  }
}

TEST(EdgeChange, AgreesWithEdgeSets) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const int n = 5 + static_cast<int>(rng() % 10);
    std::vector<int> o(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
    const Tour t(o);
    const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    const Move m = k % 2 ? Move{MoveKind::two_opt, std::min(a, b), std::max(a, b)} : Move{MoveKind::relocate, a, b};
    const auto before = edges_of(t), after = edges_of(apply_move(t, m));
    for (const auto& e : all_edges(n)) {
      const bool gone = std::binary_search(before.begin(), before.end(), e) &&
                        !std::binary_search(after.begin(), after.end(), e);
      EXPECT_EQ(move_removes(t, m, e), gone);
    }
  }
}

TEST(EdgesOf, Triangle) {
  const auto e = edges_of(Tour({2, 0, 1}));
  EXPECT_EQ(e, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(EdgesOf, DegreeTwoAndRotationInvariant) {
  std::vector<int> o = {4, 2, 0, 6, 1, 3, 5};
  const auto base = edges_of(Tour(o));
  ASSERT_EQ(base.size(), 7u);
  std::vector<int> deg(7, 0);
  for (const auto& e : base) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (int d : deg) EXPECT_EQ(d, 2);
  std::rotate(o.begin(), o.begin() + 3, o.end());
  EXPECT_EQ(edges_of(Tour(o)), base);
  std::reverse(o.begin(), o.end());
  EXPECT_EQ(edges_of(Tour(o)), base);
}

TEST(TourFile, RoundTrip) {
  const Tour t({3, 1, 0, 2, 4});
  std::stringstream ss;
  write_tour(ss, t, 12.375);
  const auto r = read_tour(ss);
  EXPECT_EQ(r.tour, t);
  EXPECT_EQ(r.cost, 12.375);
}

TEST(TourFile, Malformed) {
  std::stringstream a("0 1 2\n");
  EXPECT_THROW(read_tour(a), ParseError);
  std::stringstream b("0 1 x cost=3\n");
  EXPECT_THROW(read_tour(b), ParseError);
  std::stringstream c("0 1 1 cost=3\n");
  EXPECT_THROW(read_tour(c), ValidationError);
}

TEST(Canonical, SameCycle) {
  const Tour a({2, 3, 0, 1}), b({0, 3, 2, 1}), c({0, 2, 1, 3});
  EXPECT_TRUE(a.same_cycle(b));
  EXPECT_FALSE(a.same_cycle(c));
  EXPECT_EQ(a.canonical().at(0), 0);
}

}  // namespace
}  // namespace rgls
