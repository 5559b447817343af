#include "plaque/seq.hpp"

#include <algorithm>
#include <numeric>

#include "plaque/error.hpp"

namespace plaque::seqlat {

namespace {

long long floor_mod(long long v, long long m) {
  long long r = v % m;
  return r < 0 ? r + m : r;
}

void check_bits(const std::string& s, const char* what) {
  for (char c : s)
    if (c != '0' && c != '1') throw Error("BadBitWord", std::string(what) + " contains non-bit character");
}

// Minimal q dividing p such that the residue word is invariant under rotation
// by q. Invariance under rotation by any q implies invariance under gcd(q,p),
// so it is enough to scan divisors.
int minimal_rotation_period(const std::vector<uint8_t>& w) {
  int p = static_cast<int>(w.size());
  for (int q = 1; q <= p; ++q) {
    if (p % q != 0) continue;
    bool ok = true;
    for (int i = 0; i < p && ok; ++i)
      if (w[i] != w[(i + q) % p]) ok = false;
    if (ok) return q;
  }
  return p;
}

}  // namespace

char EventuallyPeriodicSequence::bit_at(long long n) const {
  long long s = static_cast<long long>(preperiod.size());
  if (n < 1) throw Error("BadPosition", "positions are 1-based");
  if (n <= s) return preperiod[static_cast<size_t>(n - 1)];
  long long p = static_cast<long long>(period.size());
  return period[static_cast<size_t>((n - s - 1) % p)];
}

TailClass::TailClass() : period_(1), word_{0} {}

TailClass::TailClass(int period, std::vector<uint8_t> word) {
  if (period < 1 || static_cast<int>(word.size()) != period)
    throw Error("BadTailClass", "period must be >= 1 and match word length");
  for (uint8_t b : word)
    if (b > 1) throw Error("BadTailClass", "word entries must be 0/1");
  int q = minimal_rotation_period(word);
  period_ = q;
  word_.assign(word.begin(), word.begin() + q);
}

TailClass TailClass::zero() { return TailClass(1, {0}); }
TailClass TailClass::one() { return TailClass(1, {1}); }

uint8_t TailClass::bit_at(long long pos) const {
  if (pos < 1) throw Error("BadPosition", "positions are 1-based");
  return word_[static_cast<size_t>((pos - 1) % period_)];
}

bool TailClass::is_zero() const { return period_ == 1 && word_[0] == 0; }
bool TailClass::is_one() const { return period_ == 1 && word_[0] == 1; }

long long TailClass::ones_per_period() const {
  return std::count(word_.begin(), word_.end(), uint8_t{1});
}

long long TailClass::nth_one_position(long long n) const {
  long long c = ones_per_period();
  if (c == 0) throw Error("BottomReached", "class has no one-positions");
  long long full = (n - 1) / c;
  long long rem = (n - 1) % c;  // rem-th one (0-based) within one period
  long long seen = 0;
  for (int i = 0; i < period_; ++i) {
    if (word_[i]) {
      if (seen == rem) return full * period_ + i + 1;
      ++seen;
    }
  }
  throw Error("Internal", "nth_one_position scan failed");
}

std::string TailClass::to_string() const {
  std::string out = "p=" + std::to_string(period_) + ";w=";
  for (uint8_t b : word_) out += static_cast<char>('0' + b);
  return out;
}

TailClass TailClass::parse(const std::string& text) {
  auto semi = text.find(';');
  if (text.rfind("p=", 0) != 0 || semi == std::string::npos || text.compare(semi + 1, 2, "w=") != 0)
    throw Error("ParseError", "expected \"p=K;w=bits\", got \"" + text + "\"");
  int p = 0;
  try {
    p = std::stoi(text.substr(2, semi - 2));
  } catch (const std::exception&) {
    throw Error("ParseError", "bad period in \"" + text + "\"");
  }
  std::string bits = text.substr(semi + 3);
  check_bits(bits, "tail class word");
  if (static_cast<int>(bits.size()) != p)
    throw Error("ParseError", "word length does not match period in \"" + text + "\"");
  std::vector<uint8_t> w(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) w[i] = static_cast<uint8_t>(bits[i] - '0');
  return TailClass(p, std::move(w));
}

bool lex_less(const TailClass& a, const TailClass& b) {
  if (a.period() != b.period()) return a.period() < b.period();
  return a.word() < b.word();
}

TailClass canonicalize(const EventuallyPeriodicSequence& s) {
  if (s.period.empty()) throw Error("EmptyPeriod", "period word must be nonempty");
  check_bits(s.preperiod, "preperiod");
  check_bits(s.period, "period");
  long long sp = static_cast<long long>(s.preperiod.size());
  int p = static_cast<int>(s.period.size());
  // Align to absolute residues: position n > sp carries period[(n-sp-1) mod p],
  // so residue j (0-based, position n with (n-1) mod p == j) carries
  // period[(j - sp) mod p].
  std::vector<uint8_t> w(p);
  for (int j = 0; j < p; ++j)
    w[j] = static_cast<uint8_t>(s.period[static_cast<size_t>(floor_mod(j - sp, p))] - '0');
  return TailClass(p, std::move(w));
}

namespace {

template <typename Op>
TailClass pointwise(const TailClass& a, const TailClass& b, Op op) {
  long long l = std::lcm(static_cast<long long>(a.period()), static_cast<long long>(b.period()));
  std::vector<uint8_t> w(static_cast<size_t>(l));
  for (long long j = 0; j < l; ++j)
    w[static_cast<size_t>(j)] =
        op(a.word()[static_cast<size_t>(j % a.period())], b.word()[static_cast<size_t>(j % b.period())]);
  return TailClass(static_cast<int>(l), std::move(w));
}

}  // namespace

TailClass join(const TailClass& a, const TailClass& b) {
  return pointwise(a, b, [](uint8_t x, uint8_t y) { return static_cast<uint8_t>(x | y); });
}

TailClass meet(const TailClass& a, const TailClass& b) {
  return pointwise(a, b, [](uint8_t x, uint8_t y) { return static_cast<uint8_t>(x & y); });
}

TailClass negate(const TailClass& a) {
  std::vector<uint8_t> w(a.word());
  for (auto& b : w) b ^= 1;
  return TailClass(a.period(), std::move(w));
}

bool leq(const TailClass& b, const TailClass& a) { return join(a, b) == a; }

TailClass shift_class(const TailClass& a, long long m) {
  int p = a.period();
  std::vector<uint8_t> w(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) w[static_cast<size_t>(j)] = a.word()[static_cast<size_t>(floor_mod(j - m, p))];
  return TailClass(p, std::move(w));
}

TailClass sq_class(long long n) {
  if (n < 1) throw Error("BadArgument", "sq(n) needs n >= 1");
  std::vector<uint8_t> w(static_cast<size_t>(n), 0);
  w.back() = 1;  // 1 exactly at residue 0 mod n
  return TailClass(static_cast<int>(n), std::move(w));
}

Signature::Signature() : gens_{TailClass::zero()} {}

Signature::Signature(std::vector<TailClass> generators) {
  if (generators.empty()) throw Error("BadSignature", "generator list must be nonempty");
  // Antichain normal form: drop duplicates and strictly dominated generators,
  // then sort. A maximal element always survives, so keep is never empty.
  std::vector<TailClass> keep;
  for (const auto& g : generators) {
    bool dominated = false;
    for (const auto& h : generators) {
      if (g == h) continue;
      if (leq(g, h)) {
        dominated = true;
        break;
      }
    }
    if (!dominated && std::find(keep.begin(), keep.end(), g) == keep.end()) keep.push_back(g);
  }
  std::sort(keep.begin(), keep.end(), lex_less);
  gens_ = std::move(keep);
}

Signature Signature::bottom() { return Signature(); }
Signature Signature::top() { return Signature({TailClass::one()}); }
Signature Signature::principal(const TailClass& a) { return Signature({a}); }

bool Signature::is_bottom() const { return gens_.size() == 1 && gens_[0].is_zero(); }

std::string Signature::to_string() const {
  std::string out;
  for (size_t i = 0; i < gens_.size(); ++i) {
    if (i) out += ';';
    out += gens_[i].to_string();
  }
  return out;
}

Signature Signature::parse(const std::string& text) {
  // Generators are themselves "p=K;w=..." so split on ';' and re-pair.
  std::vector<std::string> tokens;
  size_t start = 0;
  while (start <= text.size()) {
    size_t semi = text.find(';', start);
    if (semi == std::string::npos) semi = text.size();
    tokens.push_back(text.substr(start, semi - start));
    start = semi + 1;
  }
  std::vector<TailClass> gens;
  for (size_t i = 0; i + 1 < tokens.size(); i += 2) gens.push_back(TailClass::parse(tokens[i] + ";" + tokens[i + 1]));
  if (tokens.size() % 2 != 0 || gens.empty())
    throw Error("ParseError", "bad signature text \"" + text + "\"");
  return Signature(std::move(gens));
}

Signature sig_union(const Signature& s, const Signature& t) {
  std::vector<TailClass> gens = s.generators();
  gens.insert(gens.end(), t.generators().begin(), t.generators().end());
  return Signature(std::move(gens));
}

Signature sig_intersect(const Signature& s, const Signature& t) {
  // alpha(a) n alpha(b) = alpha(a ^ b), distributed over both generator sets.
  std::vector<TailClass> gens;
  for (const auto& a : s.generators())
    for (const auto& b : t.generators()) gens.push_back(meet(a, b));
  return Signature(std::move(gens));
}

bool sig_contains(const Signature& s, const TailClass& b) {
  for (const auto& a : s.generators())
    if (leq(b, a)) return true;
  return false;
}

Signature sig_shift(const Signature& s, long long m) {
  std::vector<TailClass> gens;
  gens.reserve(s.generators().size());
  for (const auto& a : s.generators()) gens.push_back(shift_class(a, m));
  return Signature(std::move(gens));
}

bool sig_leq(const Signature& s, const Signature& t) {
  for (const auto& a : s.generators())
    if (!sig_contains(t, a)) return false;
  return true;
}

MeetChainResult meet_chain_reduce(const std::vector<TailClass>& ts, int window) {
  if (ts.empty()) throw Error("BadArgument", "meet_chain_reduce needs a nonempty list");
  if (window < 1 || window > static_cast<int>(ts.size()))
    throw Error("BadArgument", "window must satisfy 1 <= window <= list length");
  std::vector<TailClass> partial;
  partial.reserve(static_cast<size_t>(window));
  TailClass acc = ts[0];
  partial.push_back(acc);
  for (int i = 1; i < window; ++i) {
    acc = meet(acc, ts[static_cast<size_t>(i)]);
    partial.push_back(acc);
  }
  // First n with t'_n = ... = t'_window. The last index always qualifies
  // vacuously; constancy observed over a single entry counts as stabilization
  // only when the whole examined chain is that one entry.
  int first = window;
  for (int n = window - 1; n >= 1; --n) {
    if (partial[static_cast<size_t>(n - 1)] == partial[static_cast<size_t>(n)])
      first = n;
    else
      break;
  }
  bool stabilized = first < window || window == 1;
  if (stabilized) return {true, first, partial[static_cast<size_t>(first - 1)]};
  return {false, window, partial.back()};
}

std::vector<long long> diagonal_witness(const std::vector<TailClass>& ts, int K) {
  if (ts.empty() || K < 1) throw Error("BadArgument", "diagonal_witness needs a nonempty chain and K >= 1");
  if (K > static_cast<int>(ts.size()))
    throw Error("BadArgument", "K must not exceed the chain length");
  std::vector<long long> positions;
  positions.reserve(static_cast<size_t>(K));
  TailClass acc = ts[0];
  for (int n = 1; n <= K; ++n) {
    if (n > 1) acc = meet(acc, ts[static_cast<size_t>(n - 1)]);
    if (acc.is_zero()) throw Error("BottomReached", "partial meet hit <1;0>; no diagonal witness exists");
    positions.push_back(acc.nth_one_position(n));
  }
  return positions;
}

}  // namespace plaque::seqlat
