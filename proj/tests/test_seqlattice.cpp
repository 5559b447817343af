#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle_bits.hpp"
#include "plaque/error.hpp"
#include "plaque/seq.hpp"

using namespace plaque::seqlat;
using plaque::Error;

namespace {

TailClass tc(int p, std::initializer_list<int> bits) {
  std::vector<uint8_t> w;
  for (int b : bits) w.push_back(static_cast<uint8_t>(b));
  return TailClass(p, std::move(w));
}

struct RandomSeq {
  std::string pre, per;
};

RandomSeq random_seq(std::mt19937_64& rng, int max_pre = 8, int max_per = 12) {
  std::uniform_int_distribution<int> pre_len(0, max_pre);
  std::uniform_int_distribution<int> per_len(1, max_per);
  std::uniform_int_distribution<int> bit(0, 1);
  RandomSeq s;
  int np = pre_len(rng), nq = per_len(rng);
  for (int i = 0; i < np; ++i) s.pre += static_cast<char>('0' + bit(rng));
  for (int i = 0; i < nq; ++i) s.per += static_cast<char>('0' + bit(rng));
  return s;
}

}  // namespace

TEST_CASE("canonicalize drops prefixes and minimizes the period") {
  CHECK(canonicalize({"", "10"}) == tc(2, {1, 0}));
  CHECK(canonicalize({"1", "0101"}) == tc(2, {1, 0}));
  CHECK(canonicalize({"", "1111"}) == TailClass::one());
  CHECK_THROWS_AS(canonicalize({"1", ""}), Error);
}

TEST_CASE("canonicalize aligns residues absolutely") {
  // positions: 1 -> '1' (prefix), then '0','1','0','1',... so ones sit at odd
  // positions; same class as the pure alternating word starting with 1.
  TailClass a = canonicalize({"1", "0101"});
  CHECK(a.bit_at(3) == 1);
  CHECK(a.bit_at(4) == 0);
  // randomized: prefix padding never changes the class
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    RandomSeq s = random_seq(rng);
    TailClass base = canonicalize({s.pre, s.per});
    // pad the prefix by one period-aligned copy
    TailClass padded = canonicalize({s.pre + s.per, s.per});
    CHECK(base == padded);
  }
}

TEST_CASE("boolean operations match the truncation oracle") {
  CHECK(meet(sq_class(2), sq_class(3)) == sq_class(6));
  CHECK(meet(sq_class(2), sq_class(3)).to_string() == "p=6;w=000001");
  CHECK(join(tc(2, {1, 0}), tc(2, {0, 1})) == TailClass::one());
  CHECK(negate(sq_class(2)) == tc(2, {1, 0}));
}

TEST_CASE("leq is the induced order") {
  CHECK(leq(sq_class(4), sq_class(2)));
  CHECK_FALSE(leq(sq_class(2), sq_class(3)));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    RandomSeq s = random_seq(rng);
    CHECK(leq(TailClass::zero(), canonicalize({s.pre, s.per})));
  }
}

TEST_CASE("shift_class re-aligns residues and inverts") {
  CHECK(shift_class(sq_class(2), 1) == tc(2, {1, 0}));
  TailClass a = sq_class(3);
  CHECK(shift_class(a, 0) == a);
  CHECK(shift_class(shift_class(a, 5), -5) == a);
}

TEST_CASE("sq classes") {
  CHECK(sq_class(1) == TailClass::one());
  CHECK(sq_class(2) == tc(2, {0, 1}));
  CHECK(sq_class(6) == meet(sq_class(2), sq_class(3)));
  CHECK_THROWS_AS(sq_class(0), Error);
}

TEST_CASE("signature union and intersection keep antichain normal form") {
  Signature s2 = Signature::principal(sq_class(2));
  Signature s3 = Signature::principal(sq_class(3));
  Signature s6 = Signature::principal(sq_class(6));

  CHECK(sig_intersect(s2, s3) == s6);
  CHECK(sig_union(s2, s6) == s2);

  Signature u = sig_union(s2, s3);
  CHECK(u.generators().size() == 2);
  // alpha(a) u alpha(b) is strictly below alpha(a v b): the join is not a
  // member of the union.
  TailClass j = join(sq_class(2), sq_class(3));
  CHECK_FALSE(sig_contains(u, j));
  CHECK(sig_contains(Signature::principal(j), sq_class(2)));
}

TEST_CASE("signature membership") {
  Signature s2 = Signature::principal(sq_class(2));
  CHECK(sig_contains(s2, sq_class(6)));
  Signature u = sig_union(s2, Signature::principal(sq_class(3)));
  CHECK_FALSE(sig_contains(u, join(sq_class(2), sq_class(3))));
  CHECK(sig_contains(Signature::bottom(), TailClass::zero()));
}

TEST_CASE("signature shift") {
  Signature s2 = Signature::principal(sq_class(2));
  CHECK(sig_shift(s2, 1) == Signature::principal(tc(2, {1, 0})));
  Signature u = sig_union(s2, Signature::principal(sq_class(3)));
  CHECK(sig_shift(u, 0) == u);
  CHECK(sig_shift(sig_shift(u, 4), -4) == u);
  CHECK(sig_shift(Signature::bottom(), 3) == Signature::bottom());
}

TEST_CASE("signature text round trip") {
  Signature u = sig_union(Signature::principal(sq_class(2)), Signature::principal(sq_class(3)));
  CHECK(Signature::parse(u.to_string()) == u);
  CHECK(TailClass::parse("p=6;w=000001") == sq_class(6));
  CHECK_THROWS_AS(TailClass::parse("p=3;w=01"), Error);
}

TEST_CASE("meet_chain_reduce stabilization") {
  std::vector<TailClass> chain{sq_class(2), sq_class(3), sq_class(3), sq_class(3)};
  MeetChainResult r = meet_chain_reduce(chain, 4);
  CHECK(r.stabilized);
  CHECK(r.index == 2);
  CHECK(r.value == sq_class(6));

  std::vector<TailClass> dec{sq_class(2), sq_class(4), sq_class(8), sq_class(16)};
  MeetChainResult nr = meet_chain_reduce(dec, 4);
  CHECK_FALSE(nr.stabilized);
  CHECK(nr.value == sq_class(16));

  std::vector<TailClass> single{sq_class(5)};
  MeetChainResult sr = meet_chain_reduce(single, 1);
  CHECK(sr.stabilized);
  CHECK(sr.index == 1);
  CHECK(sr.value == sq_class(5));
}

namespace {

// independent oracle: n-th one-position of the n-th partial meet, found by a
// linear scan of explicit truncations
std::vector<long long> witness_oracle(const std::vector<TailClass>& ts, int K, int W) {
  std::vector<long long> out;
  TailClass acc = ts[0];
  for (int n = 1; n <= K; ++n) {
    if (n > 1) acc = meet(acc, ts[static_cast<size_t>(n - 1)]);
    oracle::Bits bits = oracle::truncate_class(acc, W);
    int seen = 0;
    long long pos = -1;
    for (int i = 0; i < W; ++i) {
      if (bits[static_cast<size_t>(i)]) {
        if (++seen == n) {
          pos = i + 1;
          break;
        }
      }
    }
    REQUIRE(pos > 0);
    out.push_back(pos);
  }
  return out;
}

void check_witness_validity(const std::vector<TailClass>& ts, const std::vector<long long>& positions) {
  TailClass acc = ts[0];
  for (size_t n = 1; n <= positions.size(); ++n) {
    if (n > 1) acc = meet(acc, ts[n - 1]);
    for (size_t m = n - 1; m < positions.size(); ++m) CHECK(acc.bit_at(positions[m]) == 1);
  }
}

}  // namespace

TEST_CASE("diagonal witness positions") {
  std::vector<TailClass> chain{sq_class(2), sq_class(4), sq_class(8), sq_class(16)};
  std::vector<long long> expected = witness_oracle(chain, 4, 256);
  CHECK(expected == std::vector<long long>{2, 8, 24, 64});
  std::vector<long long> got = diagonal_witness(chain, 4);
  CHECK(got == expected);
  check_witness_validity(chain, got);

  std::vector<TailClass> constant{sq_class(3), sq_class(3), sq_class(3)};
  CHECK(diagonal_witness(constant, 3) == std::vector<long long>{3, 6, 9});
  check_witness_validity(constant, diagonal_witness(constant, 3));

  std::vector<TailClass> bottomed{sq_class(2), TailClass::zero()};
  CHECK_THROWS_AS(diagonal_witness(bottomed, 2), Error);
}

TEST_CASE("boolean algebra laws over randomized triples with oracle equivalence") {
  std::mt19937_64 rng(20260808);
  for (int iter = 0; iter < 2000; ++iter) {
    RandomSeq sa = random_seq(rng), sb = random_seq(rng), sc = random_seq(rng);
    TailClass a = canonicalize({sa.pre, sa.per});
    TailClass b = canonicalize({sb.pre, sb.per});
    TailClass c = canonicalize({sc.pre, sc.per});

    // laws, exact
    CHECK(join(a, b) == join(b, a));
    CHECK(meet(a, b) == meet(b, a));
    CHECK(join(a, join(b, c)) == join(join(a, b), c));
    CHECK(meet(a, meet(b, c)) == meet(meet(a, b), c));
    CHECK(join(a, meet(a, b)) == a);
    CHECK(meet(a, join(a, b)) == a);
    CHECK(meet(a, join(b, c)) == join(meet(a, b), meet(a, c)));
    CHECK(negate(join(a, b)) == meet(negate(a), negate(b)));
    CHECK(negate(negate(a)) == a);

    // windowed truncation oracle on the raw sequences
    int W = oracle::oracle_window(a, b) + 16;  // margin past both preperiods
    oracle::Bits ba = oracle::truncate_sequence(sa.pre, sa.per, W);
    oracle::Bits bb = oracle::truncate_sequence(sb.pre, sb.per, W);
    int window = 16;
    CHECK(oracle::tails_equal(oracle::bit_or(ba, bb), oracle::truncate_class(join(a, b), W), window));
    CHECK(oracle::tails_equal(oracle::bit_and(ba, bb), oracle::truncate_class(meet(a, b), W), window));
    CHECK(oracle::tails_equal(oracle::bit_not(ba), oracle::truncate_class(negate(a), W), window));

    // order consistency with signatures
    CHECK(leq(b, a) == sig_contains(Signature::principal(a), b));

    // alpha is a meet-homomorphism
    CHECK(sig_intersect(Signature::principal(a), Signature::principal(b)) ==
          Signature::principal(meet(a, b)));
  }
}

TEST_CASE("shift group law") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long long> shift_dist(-32, 32);
  for (int iter = 0; iter < 500; ++iter) {
    RandomSeq s = random_seq(rng);
    TailClass a = canonicalize({s.pre, s.per});
    long long m = shift_dist(rng), n = shift_dist(rng);
    CHECK(shift_class(shift_class(a, m), n) == shift_class(a, m + n));
    CHECK(shift_class(shift_class(a, m), -m) == a);
  }
}

TEST_CASE("signature lattice laws over randomized antichains") {
  std::mt19937_64 rng(314159);
  auto random_signature = [&rng]() {
    std::uniform_int_distribution<int> count(1, 3);
    std::vector<TailClass> gens;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
      RandomSeq s = random_seq(rng, 4, 8);
      gens.push_back(canonicalize({s.pre, s.per}));
    }
    return Signature(std::move(gens));
  };
  for (int iter = 0; iter < 500; ++iter) {
    Signature s = random_signature(), t = random_signature(), u = random_signature();

    CHECK(sig_union(s, t) == sig_union(t, s));
    CHECK(sig_intersect(s, t) == sig_intersect(t, s));
    CHECK(sig_union(s, sig_union(t, u)) == sig_union(sig_union(s, t), u));
    CHECK(sig_intersect(s, sig_intersect(t, u)) == sig_intersect(sig_intersect(s, t), u));
    CHECK(sig_union(s, sig_intersect(s, t)) == s);
    CHECK(sig_intersect(s, sig_union(s, t)) == s);
    CHECK(sig_union(s, Signature::bottom()) == s);
    CHECK(sig_intersect(s, Signature::top()) == s);
    CHECK(sig_intersect(s, Signature::bottom()) == Signature::bottom());

    // subset order behaves like a lattice order
    CHECK(sig_leq(sig_intersect(s, t), s));
    CHECK(sig_leq(s, sig_union(s, t)));
    CHECK((sig_leq(s, t) && sig_leq(t, s)) == (s == t));

    // shifts are lattice automorphisms
    std::uniform_int_distribution<long long> shift_dist(-8, 8);
    long long m = shift_dist(rng);
    CHECK(sig_shift(sig_union(s, t), m) == sig_union(sig_shift(s, m), sig_shift(t, m)));
    CHECK(sig_shift(sig_intersect(s, t), m) == sig_intersect(sig_shift(s, m), sig_shift(t, m)));
    CHECK(sig_shift(sig_shift(s, m), -m) == s);

    // the order on signatures restricts to the class order through alpha
    RandomSeq sa = random_seq(rng), sb = random_seq(rng);
    TailClass a = canonicalize({sa.pre, sa.per});
    TailClass b = canonicalize({sb.pre, sb.per});
    CHECK(sig_leq(Signature::principal(b), Signature::principal(a)) == leq(b, a));
    CHECK(sig_contains(s, TailClass::zero()));
  }
}

TEST_CASE("shift against truncation oracle") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<long long> shift_dist(0, 12);
  for (int iter = 0; iter < 300; ++iter) {
    RandomSeq s = random_seq(rng);
    TailClass a = canonicalize({s.pre, s.per});
    long long m = shift_dist(rng);
    TailClass shifted = shift_class(a, m);
    int W = 16 + 4 * a.period() + static_cast<int>(m) + 16;
    oracle::Bits base = oracle::truncate_class(a, W);
    oracle::Bits expect(base.size());
    // prepend m zeros: position n of the shift carries position n-m of a
    for (size_t i = 0; i < expect.size(); ++i)
      expect[i] = (static_cast<long long>(i) < m) ? 0 : base[i - static_cast<size_t>(m)];
    CHECK(oracle::tails_equal(expect, oracle::truncate_class(shifted, W), 16 + static_cast<int>(m)));
  }
}
