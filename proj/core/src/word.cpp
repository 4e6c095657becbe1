#include "phigeo/word.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phigeo {

namespace {

constexpr double kWeightTol = 1e-9;

std::vector<Symbol> parse_pattern(const std::string& pattern) {
  std::vector<Symbol> out;
  out.reserve(pattern.size());
  for (char c : pattern) {
    if (c == 'h')
      out.push_back(Symbol::H);
    else if (c == 'p')
      out.push_back(Symbol::P);
    else
      throw Error(Errc::parameter,
                  std::string("invalid symbol '") + c + "' in word pattern");
  }
  return out;
}

}  // namespace

SectorWord::SectorWord(const std::string& pattern, int order,
                       std::vector<double> p_weights)
    : SectorWord(parse_pattern(pattern), order, std::move(p_weights)) {}

SectorWord::SectorWord(std::vector<Symbol> symbols, int order,
                       std::vector<double> p_weights)
    : symbols_(std::move(symbols)), p_weights_(std::move(p_weights)),
      order_(order) {
  validate();
}

void SectorWord::validate() const {
  if (symbols_.empty())
    throw Error(Errc::parameter, "empty sector word");
  if (order_ < 1)
    throw Error(Errc::parameter, "word order must be >= 1");
  size_t np = 0;
  for (Symbol s : symbols_)
    if (s == Symbol::P) ++np;
  if (np != p_weights_.size())
    throw Error(Errc::parameter,
                "word has " + std::to_string(np) + " p-symbols but " +
                    std::to_string(p_weights_.size()) + " weights");
  for (double a : p_weights_)
    if (!(a > 0.0) || !std::isfinite(a))
      throw Error(Errc::parameter, "p-weights must be positive and finite");
}

int SectorWord::h_count() const {
  return static_cast<int>(std::count(symbols_.begin(), symbols_.end(), Symbol::H));
}

int SectorWord::p_count() const {
  return static_cast<int>(symbols_.size()) - h_count();
}

std::string SectorWord::pattern() const {
  std::string s;
  s.reserve(symbols_.size());
  for (Symbol sym : symbols_) s += (sym == Symbol::H) ? 'h' : 'p';
  return s;
}

double weight(const SectorWord& w) {
  double acc = w.h_count() * (kTwoPi / (w.order() + 2));
  for (double a : w.p_weights()) acc += a;
  return acc;
}

bool is_normalized(const SectorWord& w) {
  if (w.p_count() == 0)
    return w.h_count() == w.order() + 2;  // exact h-quantum arithmetic
  return std::abs(weight(w) - kTwoPi) <= kWeightTol;
}

namespace {

// Weights of the p-symbols of (symbols, weights) rotated left by r.
std::vector<double> rotated_weights(const std::vector<Symbol>& sym,
                                    const std::vector<double>& wts, size_t r) {
  const size_t m = sym.size();
  std::vector<double> out;
  out.reserve(wts.size());
  // index of the first p-weight at or after position r
  size_t wi = 0;
  for (size_t i = 0; i < r; ++i)
    if (sym[i] == Symbol::P) ++wi;
  for (size_t k = 0; k < m; ++k) {
    size_t i = (r + k) % m;
    if (sym[i] == Symbol::P) {
      out.push_back(wts[wi % wts.size()]);
      ++wi;
    }
  }
  return out;
}

}  // namespace

SectorWord canonical_form(const SectorWord& w) {
  // 1. merge cyclically adjacent p's (weights add)
  std::vector<Symbol> sym;
  std::vector<double> wts;
  size_t wi = 0;
  for (Symbol s : w.symbols()) {
    if (s == Symbol::P) {
      double a = w.p_weights()[wi++];
      if (!sym.empty() && sym.back() == Symbol::P)
        wts.back() += a;
      else {
        sym.push_back(Symbol::P);
        wts.push_back(a);
      }
    } else {
      sym.push_back(Symbol::H);
    }
  }
  // wrap-around merge: last p joins the leading p
  if (sym.size() > 1 && sym.front() == Symbol::P && sym.back() == Symbol::P) {
    wts.front() += wts.back();
    wts.pop_back();
    sym.pop_back();
  }

  // 2. least rotation: symbols lexicographic (h < p), then largest weight
  // sequence, then smallest rotation offset
  const size_t m = sym.size();
  size_t best = 0;
  auto better = [&](size_t r, size_t b) {
    for (size_t k = 0; k < m; ++k) {
      Symbol sr = sym[(r + k) % m], sb = sym[(b + k) % m];
      if (sr != sb) return sr < sb;
    }
    std::vector<double> wr = rotated_weights(sym, wts, r);
    std::vector<double> wb = rotated_weights(sym, wts, b);
    for (size_t k = 0; k < wr.size(); ++k)
      if (wr[k] != wb[k]) return wr[k] > wb[k];
    return false;  // full tie: keep the earlier rotation
  };
  for (size_t r = 1; r < m; ++r)
    if (better(r, best)) best = r;

  std::vector<Symbol> out_sym(m);
  for (size_t k = 0; k < m; ++k) out_sym[k] = sym[(best + k) % m];
  return SectorWord(std::move(out_sym), w.order(),
                    rotated_weights(sym, wts, best));
}

bool equivalent(const SectorWord& a, const SectorWord& b) {
  if (a.order() != b.order())
    throw Error(Errc::incomparable,
                "words live over different singularity orders");
  SectorWord ca = canonical_form(a);
  SectorWord cb = canonical_form(b);
  if (ca.symbols() != cb.symbols()) return false;
  if (ca.p_count() == 0) return true;
  // weights may pick different canonical rotations when nearly tied; accept
  // any symbol-preserving rotation matching within tolerance
  const auto& sym = cb.symbols();
  const size_t m = sym.size();
  for (size_t r = 0; r < m; ++r) {
    bool sym_ok = true;
    for (size_t k = 0; k < m && sym_ok; ++k)
      if (sym[(r + k) % m] != ca.symbols()[k]) sym_ok = false;
    if (!sym_ok) continue;
    std::vector<double> wr = rotated_weights(sym, cb.p_weights(), r);
    bool all = true;
    for (size_t k = 0; k < wr.size() && all; ++k)
      if (std::abs(wr[k] - ca.p_weights()[k]) > kWeightTol) all = false;
    if (all) return true;
  }
  return false;
}

HalfInteger index(const SectorWord& w) {
  if (!is_normalized(w))
    throw Error(Errc::precondition, "index requires a normalized word");
  if (w.h_count() == 0) return HalfInteger(2);  // bare p: index +1
  return HalfInteger(2 - w.h_count());
}

int min_order_realizing(const SectorWord& w) {
  SectorWord c = canonical_form(w);
  const int h = c.h_count();
  if (c.p_count() == 0) {
    if (h <= 2)
      throw Error(Errc::unrealizable,
                  "pure-h word needs at least three h-sectors");
    return h - 2;
  }
  return std::max(1, h - 1);
}

SectorLayout realize(const SectorWord& w, int order) {
  if (order < 1) throw Error(Errc::parameter, "order must be >= 1");
  SectorWord c = canonical_form(w);
  const int h = c.h_count();
  const double h_sweep = kTwoPi / (order + 2);

  std::vector<double> sweeps;
  if (c.p_count() == 0) {
    if (order != h - 2)
      throw Error(Errc::unrealizable,
                  "pure-h word of " + std::to_string(h) +
                      " sectors is only realizable at order " +
                      std::to_string(h - 2));
    sweeps.assign(static_cast<size_t>(h), h_sweep);
  } else {
    if (order < std::max(1, h - 1))
      throw Error(Errc::unrealizable,
                  "order " + std::to_string(order) +
                      " leaves no room for the parabolic sectors");
    double remainder = kTwoPi - h * h_sweep;
    double total_p = 0.0;
    for (double a : c.p_weights()) total_p += a;
    size_t wi = 0;
    sweeps.reserve(c.size());
    for (Symbol s : c.symbols())
      sweeps.push_back(s == Symbol::H
                           ? h_sweep
                           : c.p_weights()[wi++] * remainder / total_p);
  }

  // clockwise emission: the first symbol occupies the sector just below the
  // positive real axis, successive symbols continue clockwise
  SectorLayout layout;
  layout.order = order;
  double acc = kTwoPi;
  for (size_t i = 0; i < c.size(); ++i) {
    acc -= sweeps[i];
    SectorDescriptor d;
    d.type = c.symbols()[i];
    d.start_angle = std::max(acc, 0.0);
    d.sweep = sweeps[i];
    layout.sectors.push_back(d);
  }
  return layout;
}

std::string word_to_string(const SectorWord& w) {
  std::ostringstream os;
  os << "n=" << w.order();
  size_t wi = 0;
  for (Symbol s : w.symbols()) {
    if (s == Symbol::H)
      os << " h";
    else
      os << " p(" << format_double(w.p_weights()[wi++]) << ")";
  }
  return os.str();
}

SectorWord word_from_string(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  if (!(is >> tok) || tok.rfind("n=", 0) != 0)
    throw Error(Errc::parameter, "word string must start with n=<order>");
  int order = 0;
  try {
    order = std::stoi(tok.substr(2));
  } catch (const std::exception&) {
    throw Error(Errc::parameter, "malformed order in word string");
  }
  std::vector<Symbol> sym;
  std::vector<double> wts;
  while (is >> tok) {
    if (tok == "h") {
      sym.push_back(Symbol::H);
    } else if (tok.rfind("p(", 0) == 0 && tok.back() == ')') {
      sym.push_back(Symbol::P);
      try {
        wts.push_back(std::stod(tok.substr(2, tok.size() - 3)));
      } catch (const std::exception&) {
        throw Error(Errc::parameter, "malformed p-weight: " + tok);
      }
    } else {
      throw Error(Errc::parameter, "unrecognized word token: " + tok);
    }
  }
  return SectorWord(std::move(sym), order, std::move(wts));
}

}  // namespace phigeo
