#include "carnot/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <toml++/toml.hpp>

namespace carnot {

namespace {

std::string where(const std::string& source, const toml::source_region& r) {
  std::ostringstream os;
  os << source;
  if (r.begin.line) os << ":" << r.begin.line << ":" << r.begin.column;
  return os.str();
}

[[noreturn]] void fail(const std::string& source, const toml::node* n, const std::string& msg) {
  std::string loc = n ? where(source, n->source()) : source;
  int line = n ? static_cast<int>(n->source().begin.line) : 0;
  int col = n ? static_cast<int>(n->source().begin.column) : 0;
  throw ParseError(loc + ": " + msg, line, col);
}

toml::table parse_toml(std::string_view text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    const auto& b = e.source().begin;
    throw ParseError(source + ":" + std::to_string(b.line) + ":" + std::to_string(b.column) + ": " +
                         std::string(e.description()),
                     static_cast<int>(b.line), static_cast<int>(b.column));
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Integer or quoted rational.
Rational rational_of(const std::string& src, const toml::node* n) {
  if (!n) fail(src, n, "missing value");
  if (auto i = n->value<std::int64_t>()) return Rational(std::to_string(*i));
  if (auto s = n->value<std::string>()) {
    try {
      return parse_rational(*s);
    } catch (const Error& e) {
      fail(src, n, std::string("bad rational: ") + e.what());
    }
  }
  fail(src, n, "expected an integer or a rational string");
}

std::int64_t int_of(const std::string& src, const toml::node* n, const std::string& what) {
  if (!n) fail(src, n, "missing " + what);
  auto i = n->value<std::int64_t>();
  if (!i) fail(src, n, what + " must be an integer");
  return *i;
}

std::string string_of(const std::string& src, const toml::node* n, const std::string& what) {
  if (!n) fail(src, n, "missing " + what);
  auto s = n->value<std::string>();
  if (!s) fail(src, n, what + " must be a string");
  return *s;
}

std::vector<std::string> strings_of(const std::string& src, const toml::node* n,
                                    const std::string& what) {
  std::vector<std::string> out;
  if (!n) return out;
  const auto* arr = n->as_array();
  if (!arr) fail(src, n, what + " must be an array of strings");
  for (const auto& e : *arr) out.push_back(string_of(src, &e, what));
  return out;
}

std::size_t index_of(const std::string& src, const toml::node* n, std::size_t dim,
                     const std::string& what) {
  auto i = int_of(src, n, what);
  if (i < 1 || static_cast<std::size_t>(i) > dim)
    fail(src, n, what + " " + std::to_string(i) + " out of range 1.." + std::to_string(dim));
  return static_cast<std::size_t>(i - 1);
}

WeightedPoly poly_of(const std::string& src, const toml::node* n, const RingPtr& ring,
                     const std::string& what) {
  if (n && n->is_integer()) return WeightedPoly::constant(ring, rational_of(src, n));
  std::string text = string_of(src, n, what);
  try {
    return parse_poly(text, ring);
  } catch (const ParseError& e) {
    const auto& b = n->source().begin;
    int col = static_cast<int>(b.column) + 1 + std::max(e.column() - 1, 0);
    throw ParseError(src + ":" + std::to_string(b.line) + ":" + std::to_string(col) + ": " + what +
                         ": " + e.what(),
                     static_cast<int>(b.line), col);
  } catch (const Error& e) {
    fail(src, n, what + ": " + e.what());
  }
}

}  // namespace

LoadedGroup parse_group(std::string_view text, const std::string& source) {
  toml::table t = parse_toml(text, source);
  const std::string& src = source;

  LoadedGroup out;
  out.name = t["name"] ? string_of(src, t.get("name"), "name") : "";
  auto n = int_of(src, t.get("dimension"), "dimension");
  if (n < 1 || n > 24) fail(src, t.get("dimension"), "dimension must be in 1..24");
  const auto dim = static_cast<std::size_t>(n);

  const auto* layers = t.get_as<toml::array>("layers");
  if (!layers) fail(src, t.get("layers"), "layers must be an array of [first, last] ranges");
  std::vector<int> weights(dim, 0);
  std::size_t next = 0;
  int layer = 0;
  for (const auto& l : *layers) {
    ++layer;
    const auto* r = l.as_array();
    if (!r || r->size() != 2) fail(src, &l, "layer must be [first, last]");
    std::size_t a = index_of(src, r->get(0), dim, "layer start");
    std::size_t b = index_of(src, r->get(1), dim, "layer end");
    if (a != next || b < a) fail(src, &l, "layers must cover 1..dimension contiguously in order");
    for (std::size_t i = a; i <= b; ++i) weights[i] = layer;
    next = b + 1;
  }
  if (next != dim) fail(src, layers, "layers do not cover every basis index");

  std::vector<std::string> labels = strings_of(src, t.get("labels"), "labels");
  if (labels.empty())
    for (std::size_t i = 0; i < dim; ++i) labels.push_back("X" + std::to_string(i + 1));
  if (labels.size() != dim) fail(src, t.get("labels"), "labels must have one entry per basis vector");
  std::vector<std::string> coords = strings_of(src, t.get("coordinates"), "coordinates");
  if (!coords.empty() && coords.size() != dim)
    fail(src, t.get("coordinates"), "coordinates must have one entry per basis vector");
  std::vector<std::string> covs = strings_of(src, t.get("covectors"), "covectors");
  if (!covs.empty() && covs.size() != dim)
    fail(src, t.get("covectors"), "covectors must have one entry per basis vector");

  StratifiedAlgebra a(labels, weights);
  std::vector<std::vector<bool>> seen(dim, std::vector<bool>(dim, false));
  if (const auto* br = t.get("brackets")) {
    const auto* arr = br->as_array();
    if (!arr) fail(src, br, "brackets must be an array of tables");
    for (const auto& e : *arr) {
      const auto* bt = e.as_table();
      if (!bt) fail(src, &e, "bracket must be a table {i, j, value}");
      std::size_t i = index_of(src, bt->get("i"), dim, "bracket index i");
      std::size_t j = index_of(src, bt->get("j"), dim, "bracket index j");
      if (i == j) fail(src, &e, "bracket of a basis vector with itself");
      if (seen[i][j]) fail(src, &e, "bracket [" + labels[i] + "," + labels[j] + "] given twice");
      seen[i][j] = seen[j][i] = true;
      Vector v(dim);
      const auto* val = bt->get("value");
      const auto* terms = val ? val->as_array() : nullptr;
      if (!terms) fail(src, val ? val : &e, "bracket value must be an array of [k, coefficient]");
      for (const auto& term : *terms) {
        const auto* pair = term.as_array();
        if (!pair || pair->size() != 2) fail(src, &term, "bracket term must be [k, coefficient]");
        std::size_t k = index_of(src, pair->get(0), dim, "bracket result index");
        v[k] += rational_of(src, pair->get(1));
      }
      a.set_bracket(i, j, v);
    }
  }

  out.validation = validate_algebra(a);
  out.algebra = std::make_shared<const StratifiedAlgebra>(a);
  if (out.validation.lie_algebra_ok())
    out.group = make_group(std::move(a), out.name, std::move(coords), std::move(covs));
  return out;
}

LoadedGroup load_group(const std::filesystem::path& path) {
  LoadedGroup g = parse_group(read_file(path), path.string());
  g.path = path;
  if (g.name.empty()) g.name = path.stem().string();
  return g;
}

const NamedForm& Scenario::form(const std::string& name) const {
  for (const auto& f : forms)
    if (f.name == name) return f;
  throw InputError(path.string() + ": no form named '" + name + "'");
}

namespace {

GroupPtr require_group(const LoadedGroup& g, const std::string& src) {
  if (!g.group)
    throw InputError(src + ": group " + g.name + " is not a valid graded Lie algebra: " +
                     g.validation.summary());
  return g.group;
}

Mask covector_of(const std::string& src, const toml::node* n, const Group& g) {
  if (!n) fail(src, n, "missing covector");
  if (const auto* arr = n->as_array()) {
    std::vector<int> idx;
    for (const auto& e : *arr) idx.push_back(static_cast<int>(index_of(src, &e, g.dim(), "covector index")));
    Mask m = mask_of(idx);
    if (mask_degree(m) != static_cast<int>(idx.size())) fail(src, n, "repeated covector index");
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != idx) fail(src, n, "covector indices must be strictly increasing");
    return m;
  }
  std::string text = string_of(src, n, "covector");
  std::vector<int> idx;
  std::size_t pos = 0;
  const std::string sep = "∧";
  while (true) {
    std::size_t e = text.find(sep, pos);
    std::string part = text.substr(pos, e == std::string::npos ? std::string::npos : e - pos);
    while (!part.empty() && part.front() == ' ') part.erase(part.begin());
    while (!part.empty() && part.back() == ' ') part.pop_back();
    const auto& labels = g.covector_labels();
    auto it = std::find(labels.begin(), labels.end(), part);
    if (it == labels.end()) fail(src, n, "unknown covector '" + part + "'");
    idx.push_back(static_cast<int>(it - labels.begin()));
    if (e == std::string::npos) break;
    pos = e + sep.size();
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] <= idx[i - 1]) fail(src, n, "covectors must be listed in increasing index order");
  return mask_of(idx);
}

PolyForm form_of(const std::string& src, const toml::table& t, const Group& g) {
  std::optional<int> degree;
  if (t.get("degree")) degree = static_cast<int>(int_of(src, t.get("degree"), "degree"));
  const auto* terms = t.get_as<toml::array>("terms");
  if (!terms) fail(src, t.get("terms") ? t.get("terms") : &t, "form needs an array 'terms'");
  std::optional<PolyForm> out;
  for (const auto& e : *terms) {
    const auto* tt = e.as_table();
    if (!tt) fail(src, &e, "form term must be a table {covector, coefficient}");
    Mask m = covector_of(src, tt->get("covector"), g);
    int k = mask_degree(m);
    if (!degree) degree = k;
    if (k != *degree) fail(src, &e, "form term of degree " + std::to_string(k) + " in a " +
                                        std::to_string(*degree) + "-form");
    if (!out) out = PolyForm(g.dim(), *degree);
    WeightedPoly c = tt->get("coefficient") ? poly_of(src, tt->get("coefficient"), g.ring(), "coefficient")
                                            : g.constant(1);
    out->add(m, c);
  }
  if (!degree) fail(src, &t, "empty form needs an explicit degree");
  if (*degree < 0 || *degree > static_cast<int>(g.dim())) fail(src, &t, "degree out of range");
  return out ? *out : PolyForm(g.dim(), *degree);
}

std::optional<int> opt_int(const std::string& src, const toml::table* t, const char* key) {
  if (!t || !t->get(key)) return std::nullopt;
  return static_cast<int>(int_of(src, t->get(key), key));
}

std::optional<std::string> opt_string(const std::string& src, const toml::table* t, const char* key) {
  if (!t || !t->get(key)) return std::nullopt;
  return string_of(src, t->get(key), key);
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string src = path.string();
  toml::table t = parse_toml(read_file(path), src);
  Scenario s;
  s.path = path;
  s.title = t.get("title") ? string_of(src, t.get("title"), "title") : path.stem().string();

  auto dir = path.parent_path();
  auto group_at = [&](const char* key) {
    std::string rel = string_of(src, t.get(key), key);
    return load_group(dir / rel);
  };
  if (!t.get("source") && !t.get("target")) fail(src, nullptr, "scenario needs a source or target group");
  s.source = t.get("source") ? group_at("source") : group_at("target");
  s.target = t.get("target") ? group_at("target") : s.source;

  if (const auto* m = t.get("map")) {
    auto comps = strings_of(src, m, "map");
    GroupPtr g1 = require_group(s.source, src);
    GroupPtr g2 = require_group(s.target, src);
    if (comps.size() != g2->dim())
      fail(src, m, "map needs " + std::to_string(g2->dim()) + " components, got " +
                       std::to_string(comps.size()));
    std::vector<WeightedPoly> polys;
    const auto* arr = m->as_array();
    for (std::size_t i = 0; i < comps.size(); ++i)
      polys.push_back(poly_of(src, arr->get(i), g1->ring(), "map component " + std::to_string(i + 1)));
    s.map = make_map(g1, g2, std::move(polys));
  }

  if (const auto* forms = t.get_as<toml::table>("forms")) {
    for (const auto& [key, node] : *forms) {
      const auto* ft = node.as_table();
      if (!ft) fail(src, &node, "form must be a table");
      NamedForm nf;
      nf.name = std::string(key.str());
      std::string on = ft->get("on") ? string_of(src, ft->get("on"), "on") : "target";
      if (on != "source" && on != "target") fail(src, ft->get("on"), "'on' must be source or target");
      nf.on_source = on == "source";
      GroupPtr g = require_group(nf.on_source ? s.source : s.target, src);
      nf.form = form_of(src, *ft, *g);
      s.forms.push_back(std::move(nf));
    }
    // toml++ tables iterate in key order; keep file order instead.
    std::sort(s.forms.begin(), s.forms.end(), [&](const NamedForm& a, const NamedForm& b) {
      const auto& ra = forms->get(a.name)->source().begin;
      const auto& rb = forms->get(b.name)->source().begin;
      return std::pair(ra.line, ra.column) < std::pair(rb.line, rb.column);
    });
  }

  if (const auto* fns = t.get_as<toml::table>("functions")) {
    GroupPtr g = require_group(s.target, src);
    for (const auto& [key, node] : *fns)
      s.functions.emplace_back(std::string(key.str()),
                               poly_of(src, &node, g->ring(), "function " + std::string(key.str())));
  }

  auto known = [&](const std::string& name, const toml::node* n) {
    for (const auto& f : s.forms)
      if (f.name == name) return;
    fail(src, n, "no form named '" + name + "'");
  };

  if (const auto* c = t.get_as<toml::table>("commute")) {
    s.commute_forms = strings_of(src, c->get("forms"), "commute.forms");
    for (const auto& f : s.commute_forms) known(f, c->get("forms"));
    if (const auto* pages = c->get_as<toml::array>("pages"))
      for (const auto& p : *pages) {
        auto v = int_of(src, &p, "page");
        if (v < 1) fail(src, &p, "pages start at 1");
        s.commute_pages.push_back(static_cast<int>(v));
      }
    s.commute_bound = opt_int(src, c, "coeff_degree");
    if (const auto* chains = c->get_as<toml::array>("chains"))
      for (const auto& e : *chains) {
        const auto* ct = e.as_table();
        if (!ct) fail(src, &e, "chain must be a table {form, page, witnesses}");
        ChainSpec cs;
        cs.form = string_of(src, ct->get("form"), "chain form");
        known(cs.form, ct->get("form"));
        cs.page = static_cast<int>(int_of(src, ct->get("page"), "chain page"));
        cs.witnesses = strings_of(src, ct->get("witnesses"), "chain witnesses");
        for (const auto& w : cs.witnesses) known(w, ct->get("witnesses"));
        s.chains.push_back(std::move(cs));
      }
  }

  if (const auto* e = t.get_as<toml::table>("extend")) {
    s.extend_cocycle = opt_string(src, e, "cocycle");
    if (s.extend_cocycle) known(*s.extend_cocycle, e->get("cocycle"));
    s.extend_shift = opt_string(src, e, "shift");
    if (s.extend_shift) known(*s.extend_shift, e->get("shift"));
    if (auto l = opt_string(src, e, "label")) s.extend_label = *l;
  }

  if (const auto* l = t.get_as<toml::table>("lift")) {
    if (auto m = opt_string(src, l, "mode")) {
      if (*m != "pansu" && *m != "jacobian") fail(src, l->get("mode"), "lift mode must be pansu or jacobian");
      s.lift_mode = *m;
    }
    s.lift_cocycle = opt_string(src, l, "cocycle");
    if (s.lift_cocycle) known(*s.lift_cocycle, l->get("cocycle"));
    s.lift_source_cocycle = opt_string(src, l, "source_cocycle");
    if (s.lift_source_cocycle) known(*s.lift_source_cocycle, l->get("source_cocycle"));
    if (const auto* r = l->get("rescale")) {
      auto b = r->value<bool>();
      if (!b) fail(src, r, "rescale must be a boolean");
      s.lift_rescale = *b;
    }
    s.lift_bound = opt_int(src, l, "coeff_degree");
  }
  return s;
}

FiberForm to_invariant(const PolyForm& f, const std::string& what) {
  FiberForm out(f.dim(), f.degree());
  for (const auto& [m, c] : f.terms()) {
    if (!c.is_constant()) throw InputError(what + " must have constant coefficients");
    out.add(m, c.constant_term());
  }
  return out;
}

std::string algebra_brackets(const StratifiedAlgebra& a) {
  std::string out;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j) {
      Vector v = a.bracket(i, j);
      std::string rhs;
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const Rational& c = v[k];
        if (sgn(c) == 0) continue;
        Rational mag = abs(c);
        std::string coeff = mag == 1 ? "" : to_string(mag) + "·";
        if (rhs.empty())
          rhs += (sgn(c) < 0 ? "-" : "") + coeff + a.label(k);
        else
          rhs += (sgn(c) < 0 ? " - " : " + ") + coeff + a.label(k);
      }
      if (rhs.empty()) continue;
      if (!out.empty()) out += ", ";
      out += "[" + a.label(i) + "," + a.label(j) + "] = " + rhs;
    }
  return out.empty() ? "abelian" : out;
}

std::string format_matrix_row(const std::vector<WeightedPoly>& row) {
  std::string s = "[";
  for (std::size_t j = 0; j < row.size(); ++j) s += (j ? ", " : "") + to_string(row[j]);
  return s + "]";
}

}  // namespace carnot
