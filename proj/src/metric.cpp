#include "cliffcheck/metric.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cliffcheck {

Vec4 Box::sample(Rng& rng) const {
  Vec4 x;
  for (int i = 0; i < 4; ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

Vec4 Box::center() const {
  Vec4 c;
  for (int i = 0; i < 4; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

bool Box::contains(const Vec4& x) const {
  for (int i = 0; i < 4; ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExpressionTable parse_expression_table(std::string_view text, std::string_view symbol,
                                       const std::vector<int>& extents) {
  ExpressionTable table;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    if (!trim(line).empty()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_start + line.size(), {"'='"}, "end of line");
      const std::string_view lhs = trim(line.substr(0, eq));
      const std::size_t rhs_offset = line_start + eq + 1;
      const std::string_view rhs = line.substr(eq + 1);

      if (lhs == "name") {
        std::string_view ident = trim(rhs);
        for (char c : ident)
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.'))
            throw ParseError(rhs_offset, {"identifier"}, std::string(ident));
        if (ident.empty()) throw ParseError(rhs_offset, {"identifier"}, "end of line");
        table.name = std::string(ident);
      } else {
        if (lhs.substr(0, symbol.size()) != symbol)
          throw ParseError(line_start, {"'name'", "'" + std::string(symbol) + "['"}, std::string(lhs));
        std::string_view rest = lhs.substr(symbol.size());
        std::vector<int> index;
        while (!rest.empty()) {
          if (rest.front() != '[') throw ParseError(line_start + symbol.size(), {"'['"}, std::string(rest));
          const std::size_t close = rest.find(']');
          if (close == std::string_view::npos) throw ParseError(line_start, {"']'"}, std::string(rest));
          std::string_view digits = trim(rest.substr(1, close - 1));
          if (digits.empty()) throw ParseError(line_start, {"index"}, "']'");
          int v = 0;
          for (char c : digits) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError(line_start, {"index"}, std::string(digits));
            v = v * 10 + (c - '0');
          }
          index.push_back(v);
          rest = rest.substr(close + 1);
        }
        if (index.size() != extents.size())
          throw Error(ErrorKind::IndexOutOfRange, std::string(lhs) + ": expected " + std::to_string(extents.size()) +
                                                      " indices");
        for (std::size_t k = 0; k < index.size(); ++k)
          if (index[k] < 0 || index[k] >= extents[k])
            throw Error(ErrorKind::IndexOutOfRange, std::string(lhs) + ": index " + std::to_string(index[k]) +
                                                        " outside [0, " + std::to_string(extents[k]) + ")");
        Expression e;
        try {
          e = parse_expression(rhs);
        } catch (const ParseError& pe) {
          throw ParseError(rhs_offset + pe.offset(), pe.expected(),
                           rhs_offset + pe.offset() < text.size() ? std::string(1, text[rhs_offset + pe.offset()])
                                                                  : "end of input");
        }
        if (table.entries.count(index))
          throw Error(ErrorKind::InvalidArgument, std::string(lhs) + " defined more than once");
        table.entries.emplace(std::move(index), std::move(e));
      }
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return table;
}

bool MetricSpec::diagonal() const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && !g[i][j].is_zero_literal()) return false;
  return true;
}

MetricSpec make_metric_spec(std::string name, const std::map<std::pair<int, int>, Expression>& components,
                            const Box& box) {
  MetricSpec spec;
  spec.name = std::move(name);
  spec.box = box;
  std::array<std::array<bool, 4>, 4> set{};
  for (const auto& [ij, e] : components) {
    const auto [i, j] = ij;
    if (i < 0 || i > 3 || j < 0 || j > 3) throw Error(ErrorKind::IndexOutOfRange, "metric index outside 0..3");
    const int a = std::min(i, j), b = std::max(i, j);
    if (set[a][b] && !(spec.g[a][b] == e))
      throw Error(ErrorKind::InvalidArgument, "g[" + std::to_string(i) + "][" + std::to_string(j) +
                                                  "] conflicts with its mirrored entry");
    set[a][b] = true;
    spec.g[a][b] = e;
    spec.g[b][a] = e;
  }
  return spec;
}

MetricSpec parse_metric_text(std::string_view text, const Box& box) {
  ExpressionTable table = parse_expression_table(text, "g", {4, 4});
  std::map<std::pair<int, int>, Expression> comps;
  for (const auto& [idx, e] : table.entries) {
    std::pair<int, int> key{idx[0], idx[1]};
    std::pair<int, int> mirror{idx[1], idx[0]};
    if (comps.count(mirror) && idx[0] != idx[1] && !(comps.at(mirror) == e))
      throw Error(ErrorKind::InvalidArgument, "g[" + std::to_string(idx[0]) + "][" + std::to_string(idx[1]) +
                                                  "] conflicts with its mirrored entry");
    comps.emplace(key, e);
  }
  return make_metric_spec(table.name.empty() ? "unnamed" : table.name, comps, box);
}

std::string format_metric(const MetricSpec& spec) {
  std::ostringstream os;
  os << "name = " << spec.name << "\n";
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (!spec.g[i][j].is_zero_literal()) os << "g[" << i << "][" << j << "] = " << spec.g[i][j].to_string() << "\n";
  return os.str();
}

bool MetricJet::diagonal(double tol) const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      if (std::abs(g(i, j)) > tol) return false;
      for (const auto& d : dg)
        if (std::abs(d(i, j)) > tol) return false;
      for (const auto& d : ddg)
        if (std::abs(d(i, j)) > tol) return false;
    }
  return true;
}

MetricJet metric_jet(const MetricSpec& spec, const Vec4& x) {
  MetricJet mj;
  mj.x = x;
  Mat<Jet1, 4> gj;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      const Jet2 v = eval_jet(spec.g[a][b], x);
      for (int s : {0, 1}) {
        const int i = s ? b : a, j = s ? a : b;
        mj.g(i, j) = v.v;
        for (int nu = 0; nu < 4; ++nu) {
          mj.dg[nu](i, j) = v.d[nu];
          for (int mu = 0; mu < 4; ++mu) mj.ddg[mu * 4 + nu](i, j) = v.hess(mu, nu);
        }
        gj(i, j) = Jet1(v.v, v.d);
      }
    }
  }
  const MetricPoint mp(mj.g);
  mj.g_inv = mp.g_inv();
  const Jet1 omega = sqrt(-det4(gj));
  mj.omega = omega.v;
  mj.domega = omega.d;
  return mj;
}

// ---------------------------------------------------------------------------

namespace {

std::string quadratic_text(const std::array<double, 15>& c, const Vec4& center, const Vec4& half) {
  // c[0] + sum_k c[1+k] y_k + sum_{k<=l} c[..] y_k y_l with y = (x - center) / half
  auto y = [&](int k) {
    if (center[k] == 0.0 && half[k] == 1.0) return "x" + std::to_string(k);
    return "((x" + std::to_string(k) + " - " + fmt(center[k]) + ")/" + fmt(half[k]) + ")";
  };
  std::string s = fmt(c[0]);
  for (int k = 0; k < 4; ++k) s += " + " + fmt(c[1 + k]) + "*" + y(k);
  int n = 5;
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l) s += " + " + fmt(c[n++]) + "*" + y(k) + "*" + y(l);
  return s;
}

std::array<double, 15> random_coefficients(Rng& rng, double amplitude) {
  std::array<double, 15> c;
  for (auto& v : c) v = rng.uniform(-amplitude, amplitude);
  return c;
}

Box uniform_box(double lo, double hi) {
  Box b;
  b.lo = {lo, lo, lo, lo};
  b.hi = {hi, hi, hi, hi};
  return b;
}

MetricSpec from_strings(const std::string& name, const std::map<std::pair<int, int>, std::string>& comps,
                        const Box& box) {
  std::map<std::pair<int, int>, Expression> parsed;
  for (const auto& [ij, text] : comps) parsed.emplace(ij, parse_expression(text));
  return make_metric_spec(name, parsed, box);
}

std::uint64_t parse_seed(const std::string& ref, std::size_t colon) {
  const std::string digits = ref.substr(colon + 1);
  if (digits.empty()) throw Error(ErrorKind::MetricNotFound, ref + ": missing seed after ':'");
  std::uint64_t seed = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorKind::MetricNotFound, ref + ": bad seed");
    seed = seed * 10 + std::uint64_t(c - '0');
  }
  return seed;
}

MetricSpec diag_poly_random(std::uint64_t seed) {
  Rng rng(seed);
  const Box box = uniform_box(-1.0, 1.0);
  std::map<std::pair<int, int>, std::string> comps;
  for (int i = 0; i < 4; ++i) {
    const std::string q = quadratic_text(random_coefficients(rng, 0.05), box.center(), {1, 1, 1, 1});
    comps[{i, i}] = i == 0 ? "-(1 + " + q + ")" : "1 + " + q;
  }
  return from_strings("diag-poly-random:" + std::to_string(seed), comps, box);
}

MetricSpec nondiag_perturb(std::uint64_t seed) {
  Rng rng(seed);
  const Box box = uniform_box(-0.5, 0.5);
  std::map<std::pair<int, int>, std::string> comps;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const std::string p = quadratic_text(random_coefficients(rng, 1.0), {0, 0, 0, 0}, {1, 1, 1, 1});
      const std::string base = i != j ? "0" : (i == 0 ? "-1" : "1");
      comps[{i, j}] = base + " + 0.05*(" + p + ")";
    }
  return from_strings("nondiag-perturb:" + std::to_string(seed), comps, box);
}

}  // namespace

std::vector<CatalogEntry> catalog() {
  return {
      {"minkowski", "diag(-1, 1, 1, 1); box [-1,1]^4"},
      {"flrw", "diag(-1, x0^2, x0^2, x0^2), scale factor a = x0; box x0 in [1,3], others [-1,1]"},
      {"schwarzschild-diagonal",
       "M = 1, coordinates (t, r, theta, phi) = (x0..x3); box r in [3,10], theta in [0.5,2.6]"},
      {"diag-poly-random[:seed]", "diagonal, entries -(1+q0), 1+qi with random quadratic qi; box [-1,1]^4"},
      {"nondiag-perturb[:seed]", "Minkowski + 0.05 * random symmetric quadratic; box [-0.5,0.5]^4"},
  };
}

MetricSpec resolve_metric(const std::string& ref, const Box* file_box) {
  if (ref == "minkowski")
    return from_strings("minkowski", {{{0, 0}, "-1"}, {{1, 1}, "1"}, {{2, 2}, "1"}, {{3, 3}, "1"}},
                        uniform_box(-1.0, 1.0));
  if (ref == "flrw") {
    Box box = uniform_box(-1.0, 1.0);
    box.lo[0] = 1.0;
    box.hi[0] = 3.0;
    return from_strings("flrw", {{{0, 0}, "-1"}, {{1, 1}, "x0^2"}, {{2, 2}, "x0^2"}, {{3, 3}, "x0^2"}}, box);
  }
  if (ref == "schwarzschild-diagonal" || ref == "schwarzschild") {
    Box box = uniform_box(-1.0, 1.0);
    box.lo[1] = 3.0;
    box.hi[1] = 10.0;
    box.lo[2] = 0.5;
    box.hi[2] = 2.6;
    return from_strings("schwarzschild-diagonal",
                        {{{0, 0}, "-(1 - 2/x1)"},
                         {{1, 1}, "1/(1 - 2/x1)"},
                         {{2, 2}, "x1^2"},
                         {{3, 3}, "x1^2*sin(x2)^2"}},
                        box);
  }
  const std::size_t colon = ref.find(':');
  const std::string base = ref.substr(0, colon);
  if (base == "diag-poly-random") return diag_poly_random(colon == std::string::npos ? 1 : parse_seed(ref, colon));
  if (base == "nondiag-perturb") return nondiag_perturb(colon == std::string::npos ? 1 : parse_seed(ref, colon));

  std::ifstream in(ref, std::ios::binary);
  if (!in) throw Error(ErrorKind::MetricNotFound, "no builtin metric or readable file named '" + ref + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_metric_text(buf.str(), file_box ? *file_box : Box{});
}

std::vector<std::string> standard_metric_refs() {
  std::vector<std::string> refs = {"minkowski", "flrw", "schwarzschild-diagonal"};
  for (int s = 1; s <= 5; ++s) refs.push_back("diag-poly-random:" + std::to_string(s));
  for (int s = 1; s <= 5; ++s) refs.push_back("nondiag-perturb:" + std::to_string(s));
  return refs;
}

std::vector<std::string> diagonal_metric_refs() {
  std::vector<std::string> refs = {"minkowski", "flrw", "schwarzschild-diagonal"};
  for (int s = 1; s <= 5; ++s) refs.push_back("diag-poly-random:" + std::to_string(s));
  return refs;
}

Expression random_quadratic(Rng& rng, const Box& box, double amplitude) {
  Vec4 half;
  for (int k = 0; k < 4; ++k) half[k] = 0.5 * (box.hi[k] - box.lo[k]);
  return parse_expression(quadratic_text(random_coefficients(rng, amplitude), box.center(), half));
}

Expression random_quadratic_raw(Rng& rng, double amplitude) {
  return parse_expression(quadratic_text(random_coefficients(rng, amplitude), {0, 0, 0, 0}, {1, 1, 1, 1}));
}

Mat<Jet2, 4> metric_taylor(const MetricJet& mj) {
  Mat<Jet2, 4> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Jet2 v = Jet2::constant(mj.g(i, j));
      for (int a = 0; a < 4; ++a) {
        v.d[a] = mj.dg[a](i, j);
        for (int b = 0; b < 4; ++b) v.hess(a, b) = mj.second(a, b)(i, j);
      }
      r(i, j) = v;
    }
  return r;
}

}  // namespace cliffcheck
