#include "carnot/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "carnot/io.hpp"

namespace carnot {

using json = nlohmann::ordered_json;

namespace {

struct Report {
  json j;
  std::ostringstream t;
  int code = 0;

  void fail() { code = std::max(code, 1); }
};

std::string status(bool ok) { return ok ? "PASS" : "FAIL"; }

json matrix_json(const PolyMatrix& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& e : r) row.push_back(to_string(e));
    rows.push_back(row);
  }
  return rows;
}

PolyMatrix to_poly(const Matrix& m, const RingPtr& ring) {
  PolyMatrix out(m.rows(), std::vector<WeightedPoly>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = WeightedPoly::constant(ring, m(i, j));
  return out;
}

void print_matrix(std::ostream& os, const PolyMatrix& m, const std::string& indent = "  ") {
  for (const auto& r : m) os << indent << format_matrix_row(r) << "\n";
}

std::string weights_text(const StratifiedAlgebra& a) {
  std::string s;
  for (std::size_t i = 0; i < a.dim(); ++i)
    s += (i ? " " : "") + a.label(i) + ":" + std::to_string(a.weight(i));
  return s;
}

json algebra_json(const StratifiedAlgebra& a) {
  json j;
  j["labels"] = a.labels();
  j["weights"] = a.weights();
  j["brackets"] = algebra_brackets(a);
  return j;
}

int bounded(std::optional<int> requested, int fallback, int cap, const std::string& what) {
  int d = requested.value_or(std::min(fallback, cap));
  if (d < 0) throw InputError(what + " must be non-negative");
  if (d > cap)
    throw InputError(what + " " + std::to_string(d) + " exceeds CARNOT_MAX_DEGREE=" + std::to_string(cap));
  return d;
}

GroupPtr usable(const LoadedGroup& g, const CommandOptions& opt) {
  if (!g.group)
    throw InputError("group " + g.name + " is not a valid graded Lie algebra: " + g.validation.summary());
  if (opt.strict_stratified && !g.validation.generated_by_layer_one)
    throw InputError("group " + g.name + " is not stratified (layer 1 does not generate)");
  return g.group;
}

const PolyMap& need_map(const Scenario& s) {
  if (!s.map) throw InputError(s.path.string() + ": scenario has no map");
  return *s.map;
}

FiberForm invariant_named(const Scenario& s, const std::string& name, bool on_source) {
  const auto& f = s.form(name);
  if (f.on_source != on_source)
    throw InputError("form " + name + " must live on the " + (on_source ? "source" : "target"));
  return to_invariant(f.form, "form " + name);
}

// ---------------------------------------------------------------- check

void cmd_check(const std::filesystem::path& path, const CommandOptions& opt, Report& r) {
  LoadedGroup lg = load_group(path);
  const StratifiedAlgebra& a = *lg.algebra;
  const auto& v = lg.validation;
  r.j["group"] = lg.name;
  r.j["dimension"] = a.dim();
  r.j["step"] = a.step();
  r.j["algebra"] = algebra_json(a);
  r.t << "group " << lg.name << ": dimension " << a.dim() << ", step " << a.step() << "\n";
  r.t << "  weights  " << weights_text(a) << "\n";
  r.t << "  brackets " << algebra_brackets(a) << "\n";

  json jv;
  jv["failures"] = v.failures;
  jv["generated_by_layer_one"] = v.generated_by_layer_one;
  jv["homogeneous_dimension"] = v.homogeneous_dimension;
  for (const auto& f : v.failures) r.t << "FAIL " << f << "\n";
  if (!v.lie_algebra_ok()) {
    r.fail();
    jv["status"] = "FAIL";
    r.j["validation"] = jv;
    return;
  }
  if (v.generated_by_layer_one) {
    r.t << "valid Carnot algebra, Q=" << v.homogeneous_dimension << "\n";
    jv["status"] = "PASS";
  } else if (opt.strict_stratified) {
    r.t << "FAIL not stratified: layer 1 does not generate, Q=" << v.homogeneous_dimension << "\n";
    jv["status"] = "FAIL";
    r.fail();
  } else {
    r.t << "graded algebra in homogeneous mode (layer 1 does not generate), Q="
        << v.homogeneous_dimension << "\n";
    jv["status"] = "PASS";
  }
  r.j["validation"] = jv;

  const Group& g = *lg.group;
  const int n = static_cast<int>(g.dim());
  int D = bounded(opt.coeff_degree, 2, opt.max_degree, "coefficient degree");
  auto mc = multicomplex_check(g, 0, n, D);
  json jm;
  jm["coeff_degree"] = D;
  jm["elements"] = mc.elements_checked;
  jm["identities"] = mc.identities_checked;
  jm["status"] = status(mc.ok);
  if (mc.first_violation) jm["violation"] = *mc.first_violation;
  r.j["multicomplex"] = jm;
  r.t << "multicomplex " << (mc.ok ? "OK" : "FAIL") << ": sum d_i d_j = 0 for k 0.." << n
      << ", coefficient degree <= " << D << " (" << mc.elements_checked << " elements, "
      << mc.identities_checked << " identities)\n";
  if (!mc.ok) {
    r.fail();
    r.t << "  " << mc.first_violation.value_or("") << "\n";
  }

  const auto& fc = g.fiber();
  json jh = json::array();
  json jr = json::array();
  r.t << "Hodge decomposition (k, p): dim = Im d0 + ker box0 + Im delta0\n";
  bool hodge_ok = true;
  for (int k = 0; k <= n; ++k)
    for (int p : fc.weights_in_degree(k)) {
      auto hd = fc.hodge_decompose(k, p);
      std::size_t a0 = hd.image_d0.dimension(), h = hd.harmonic.dimension(), b0 = hd.image_delta0.dimension();
      bool ok = a0 + h + b0 == hd.basis.size();
      hodge_ok = hodge_ok && ok;
      std::vector<std::string> rumin;
      for (const auto& vec : hd.harmonic.basis()) rumin.push_back(g.to_string(fc.from_vector(vec, k, p)));
      jh.push_back({{"k", k}, {"p", p}, {"dim", hd.basis.size()}, {"image_d0", a0}, {"harmonic", h},
                    {"image_delta0", b0}});
      if (!rumin.empty()) jr.push_back({{"k", k}, {"p", p}, {"forms", rumin}});
      r.t << "  (" << k << ", " << p << "): " << hd.basis.size() << " = " << a0 << " + " << h << " + "
          << b0 << (ok ? "" : "  FAIL") << "\n";
    }
  if (!hodge_ok) r.fail();
  r.j["hodge"] = jh;
  r.j["rumin"] = jr;
  r.t << "Rumin forms E0:\n";
  for (const auto& e : jr) {
    r.t << "  k=" << e["k"].get<int>() << ", weight " << e["p"].get<int>() << ": ";
    bool first = true;
    for (const auto& f : e["forms"]) {
      r.t << (first ? "" : ", ") << f.get<std::string>();
      first = false;
    }
    r.t << "\n";
  }
}

// ---------------------------------------------------------------- rumin

std::vector<Exponent> monomials_up_to(std::size_t n, int D) {
  std::vector<Exponent> out;
  Exponent e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      out.push_back(e);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = static_cast<std::uint16_t>(a);
      rec(i + 1, left - a);
    }
    e[i] = 0;
  };
  rec(0, D);
  return out;
}

void cmd_rumin(const std::filesystem::path& path, const CommandOptions& opt, Report& r) {
  LoadedGroup lg = load_group(path);
  GroupPtr gp = usable(lg, opt);
  const Group& g = *gp;
  const auto& fc = g.fiber();
  const int n = static_cast<int>(g.dim());
  auto [lo, hi] = opt.degrees.value_or(std::pair{0, n});
  if (lo < 0 || hi > n || lo > hi)
    throw InputError("degree range " + std::to_string(lo) + ".." + std::to_string(hi) +
                     " outside 0.." + std::to_string(n));
  int D = bounded(opt.coeff_degree, 2, opt.max_degree, "coefficient degree");
  r.j["group"] = lg.name;
  r.j["degrees"] = {lo, hi};
  r.j["coeff_degree"] = D;
  r.t << "group " << lg.name << ", Rumin complex in degrees " << lo << ".." << hi << "\n";

  auto monos = monomials_up_to(g.dim(), D);
  json jk = json::array();
  std::size_t checked = 0;
  bool ok = true;
  for (int k = lo; k <= hi; ++k) {
    json jd = json::array();
    r.t << "k=" << k << "\n";
    for (int p : fc.weights_in_degree(k)) {
      auto hd = fc.hodge_decompose(k, p);
      for (const auto& vec : hd.harmonic.basis()) {
        FiberForm xi = fc.from_vector(vec, k, p);
        json je;
        je["form"] = g.to_string(xi);
        je["weight"] = p;
        r.t << "  E0 weight " << p << ": " << g.to_string(xi) << "\n";
        if (k < n) {
          OperatorForm op(g.dim(), k);
          for (const auto& [m, c] : xi.terms()) op.add(m, FrameOperator::identity() * c);
          OperatorForm dc = rumin_dc(g, op);
          std::string fxi = xi.terms().size() == 1 ? "f·" + g.to_string(xi) : "f·(" + g.to_string(xi) + ")";
          je["dc"] = g.to_string(dc, "f");
          r.t << "    d_c(" << fxi << ") = " << g.to_string(dc, "f") << "\n";
          json js;
          auto split = dc_weight_split(g, op);
          if (split.size() > 1)
            for (const auto& [j, part] : split) {
              js[std::to_string(j)] = g.to_string(part, "f");
              r.t << "      order " << j << ": " << g.to_string(part, "f") << "\n";
            }
          if (!js.is_null()) je["by_order"] = js;

          // d_c lands in E0 and squares to zero on f·ξ, f of degree <= D.
          for (const auto& e : monos) {
            PolyForm a = g.lift(xi);
            PolyForm fa(g.dim(), k);
            auto f = WeightedPoly::monomial(g.ring(), e);
            for (const auto& [m, c] : a.terms()) fa.add(m, c * f);
            PolyForm d1 = rumin_dc(g, fa);
            ++checked;
            if (!is_rumin_form(g, d1) || !rumin_dc(g, d1).is_zero()) {
              ok = false;
              r.t << "    FAIL d_c∘d_c on " << g.to_string(fa) << "\n";
            }
          }
        }
        jd.push_back(je);
      }
    }
    jk.push_back({{"k", k}, {"forms", jd}});
  }
  r.j["complex"] = jk;
  r.j["dc_squared"] = {{"forms", checked}, {"status", status(ok)}};
  r.t << "d_c∘d_c = 0 and d_c(E0) ⊆ E0 on " << checked << " forms with coefficient degree <= " << D
      << ": " << status(ok) << "\n";
  if (!ok) r.fail();
}

// ---------------------------------------------------------------- pansu

std::optional<PansuDerivative> report_contact(const PolyMap& phi, Report& r) {
  const auto& s = phi.source->algebra();
  const auto& t = phi.target->algebra();
  auto cr = contact_check(phi);
  json jc;
  jc["status"] = status(cr.ok());
  json jv = json::array();
  for (const auto& v : cr.violations) {
    jv.push_back({{"row", t.label(v.row)}, {"col", s.label(v.col)}, {"value", to_string(v.value)}});
    r.t << "  violated: a(" << t.label(v.row) << ", " << s.label(v.col) << ") = " << to_string(v.value)
        << "\n";
  }
  jc["violations"] = jv;
  r.j["contact"] = jc;
  if (!cr.ok()) {
    r.t << "contact FAIL: " << cr.violations.size() << " equation(s) violated\n";
    r.fail();
    return std::nullopt;
  }
  r.t << "contact OK\n";
  auto dp = pansu_derivative(phi);
  r.j["pansu_derivative"] = {{"matrix", matrix_json(dp.matrix)},
                             {"homomorphism", status(dp.hom.ok())},
                             {"mode", dp.hom_mode}};
  r.t << "Pansu derivative (" << t.dim() << "x" << s.dim() << "):\n";
  print_matrix(r.t, dp.matrix);
  r.t << "homomorphism check (" << dp.hom_mode << "): " << status(dp.hom.ok()) << "\n";
  if (!dp.hom.ok()) r.fail();
  return dp;
}

void scenario_header(const Scenario& s, Report& r) {
  r.j["scenario"] = s.title;
  r.j["source"] = s.source.name;
  r.j["target"] = s.target.name;
  r.t << "scenario " << s.title << ": " << s.source.name << " -> " << s.target.name << "\n";
  if (s.map) {
    std::vector<std::string> comps;
    for (const auto& c : s.map->components) comps.push_back(to_string(c));
    r.j["map"] = comps;
    r.t << "  map (";
    for (std::size_t i = 0; i < comps.size(); ++i) r.t << (i ? ", " : "") << comps[i];
    r.t << ")\n";
  }
}

void cmd_pansu(const std::filesystem::path& path, const CommandOptions& opt, Report& r) {
  Scenario s = load_scenario(path);
  usable(s.source, opt);
  usable(s.target, opt);
  const PolyMap& phi = need_map(s);
  scenario_header(s, r);
  auto dp = report_contact(phi, r);
  if (!dp) return;
  const Group& g1 = *phi.source;
  const Group& g2 = *phi.target;

  json jp = json::array();
  r.t << "Pansu pullback:\n";
  for (std::size_t i = 0; i < g2.dim(); ++i) {
    auto th = g2.form(Mask{1} << i, g2.constant(1));
    std::string v = g1.to_string(pansu_pullback(phi, *dp, th));
    jp.push_back({{"form", g2.to_string(th)}, {"pullback", v}});
    r.t << "  φ*" << g2.to_string(th) << " = " << v << "\n";
  }
  for (const auto& f : s.forms) {
    if (f.on_source) continue;
    std::string v = g1.to_string(pansu_pullback(phi, *dp, f.form));
    jp.push_back({{"name", f.name}, {"form", g2.to_string(f.form)}, {"pullback", v}});
    r.t << "  φ*" << f.name << " = φ*(" << g2.to_string(f.form) << ") = " << v << "\n";
  }
  r.j["pullback"] = jp;

  json jd = json::array();
  for (const auto& [name, gf] : s.functions) {
    std::string v = g1.to_string(exterior_discrepancy(phi, gf));
    jd.push_back({{"name", name}, {"function", to_string(gf)}, {"discrepancy", v}});
    r.t << "  d φ*" << name << " - φ*d " << name << " = " << v << "   (" << name << " = " << to_string(gf)
        << ")\n";
  }
  if (!jd.empty()) r.j["exterior_discrepancy"] = jd;
}

// ---------------------------------------------------------------- commute

WitnessChain chain_from_spec(const Scenario& s, const ChainSpec& c, const SpectralEngine& eng) {
  const Group& g = eng.group();
  const auto& alpha = s.form(c.form);
  auto w = form_weight(g, alpha.form);
  if (!w) throw InputError("chain form " + c.form + " is zero");
  WitnessChain ch{alpha.form, *w, {}};
  for (const auto& z : c.witnesses) {
    const auto& f = s.form(z);
    if (f.on_source) throw InputError("witness " + z + " must live on the target");
    ch.z.push_back(f.form);
  }
  if (ch.order() < c.page)
    throw InputError("witness chain for " + c.form + " has order " + std::to_string(ch.order()) +
                     " < page " + std::to_string(c.page));
  if (!eng.verify(ch))
    throw InputError("witness chain for " + c.form + " at page " + std::to_string(c.page) +
                     " does not satisfy the Z_r equations");
  return ch;
}

void cmd_commute(const std::filesystem::path& path, const CommandOptions& opt, Report& r) {
  Scenario s = load_scenario(path);
  usable(s.source, opt);
  usable(s.target, opt);
  const PolyMap& phi = need_map(s);
  const Group& g1 = *phi.source;
  const Group& g2 = *phi.target;
  SpectralEngine eng(phi.target);

  std::vector<const NamedForm*> forms;
  if (!s.commute_forms.empty())
    for (const auto& n : s.commute_forms) forms.push_back(&s.form(n));
  else
    for (const auto& f : s.forms)
      if (!f.on_source) forms.push_back(&f);
  for (const auto* f : forms)
    if (f->on_source) throw InputError("form " + f->name + " must live on the target");
  std::vector<int> pages = opt.page ? std::vector<int>{*opt.page} : s.commute_pages;
  if (pages.empty()) pages = {1};
  for (int p : pages)
    if (p < 1) throw InputError("page must be >= 1");
  std::optional<int> D = opt.coeff_degree ? opt.coeff_degree : s.commute_bound;
  if (D && (*D < 0 || *D > opt.max_degree))
    throw InputError("coefficient degree " + std::to_string(*D) + " outside 0..CARNOT_MAX_DEGREE=" +
                     std::to_string(opt.max_degree));

  // Chains are validated before any output: a bad chain is an input error.
  std::vector<std::pair<const ChainSpec*, WitnessChain>> explicit_chains;
  for (const auto& c : s.chains) explicit_chains.emplace_back(&c, chain_from_spec(s, c, eng));

  scenario_header(s, r);
  auto dp = report_contact(phi, r);
  if (!dp) return;

  json jc = json::array();
  for (const auto* f : forms) {
    auto w = form_weight(g2, f->form);
    if (!w && !f->form.is_zero()) throw InputError("form " + f->name + " is not homogeneous");
    for (int page : pages) {
      json e;
      e["form"] = f->name;
      e["alpha"] = g2.to_string(f->form);
      e["page"] = page;
      r.t << "α = " << f->name << " = " << g2.to_string(f->form) << ", i = " << page << "\n";
      std::optional<WitnessChain> chain;
      for (const auto& [spec, ch] : explicit_chains)
        if (spec->form == f->name && spec->page == page) chain = ch;
      if (!chain && !f->form.is_zero()) {
        int dz = std::max(max_coefficient_degree(f->form), 0);
        if (D) dz = std::max(dz, *D);
        try {
          chain = eng.z_membership(f->form, page, dz);
        } catch (const TruncationError& te) {
          e["status"] = "FAIL";
          e["reason"] = te.what();
          r.t << "  FAIL " << te.what() << "\n";
          r.fail();
          jc.push_back(e);
          continue;
        }
      }
      if (f->form.is_zero()) chain = WitnessChain{f->form, 0, {}};
      if (!chain) {
        e["status"] = "SKIP";
        e["reason"] = "not in Z_" + std::to_string(page);
        r.t << "  SKIP α ∉ Z_" << page << "\n";
        jc.push_back(e);
        continue;
      }
      try {
        auto cr = commutativity_check(phi, *chain, page, D);
        bool capped = cr.bound > opt.max_degree;
        bool ok = cr.ok() && !capped;
        e["bound"] = cr.bound;
        e["lhs"] = g1.to_string(cr.lhs);
        e["rhs"] = g1.to_string(cr.rhs);
        e["difference"] = g1.to_string(cr.difference);
        json cert = json::array();
        if (cr.certificate) {
          int p = cr.certificate->weight;
          for (std::size_t j = 0; j < cr.certificate->c.size(); ++j)
            cert.push_back({{"weight", p - static_cast<int>(j)}, {"form", g1.to_string(cr.certificate->c[j])}});
        }
        e["certificate"] = cert;
        e["status"] = status(ok);
        r.t << "  φ*Δ_i α       = " << g1.to_string(cr.lhs) << "\n";
        r.t << "  Δ_i φ*α       = " << g1.to_string(cr.rhs) << "\n";
        r.t << "  difference    = " << g1.to_string(cr.difference) << "\n";
        if (!cr.difference.is_zero())
          for (const auto& c : cert)
            r.t << "  certificate c_" << c["weight"].get<int>() << " = " << c["form"].get<std::string>() << "\n";
        r.t << "  " << status(ok) << " (coefficient degree bound " << cr.bound << ")";
        if (!cr.pullback_in_z) r.t << ": φ*α ∉ Z_" << page;
        else if (!cr.difference_in_b) r.t << ": difference ∉ B_" << page;
        if (capped) r.t << ": bound exceeds CARNOT_MAX_DEGREE=" << opt.max_degree;
        r.t << "\n";
        if (!ok) r.fail();
      } catch (const TruncationError& te) {
        e["status"] = "FAIL";
        e["reason"] = te.what();
        r.t << "  FAIL " << te.what() << "\n";
        r.fail();
      }
      jc.push_back(e);
    }
    if (!f->form.is_zero() && is_rumin_form(g2, f->form) && f->form.degree() < static_cast<int>(g2.dim())) {
      auto rd = dc_noncommutativity_witness(phi, f->form);
      json jd;
      jd["form"] = f->name;
      jd["pulled"] = g1.to_string(rd.pulled);
      jd["lhs"] = g1.to_string(rd.lhs);
      jd["rhs"] = g1.to_string(rd.rhs);
      jd["raw"] = g1.to_string(rd.raw);
      jd["projected"] = g1.to_string(rd.projected);
      jd["commutes"] = rd.projected.is_zero();
      r.j["dc_discrepancy"].push_back(jd);
      r.t << "plain d_c for " << f->name << ":\n";
      r.t << "  d_c Π0 φ*α         = " << g1.to_string(rd.lhs) << "\n";
      r.t << "  φ*d_c α            = " << g1.to_string(rd.rhs) << "\n";
      r.t << "  difference         = " << g1.to_string(rd.raw) << "\n";
      r.t << "  Π0-projected       = " << g1.to_string(rd.projected)
          << (rd.projected.is_zero() ? "  (commutes)" : "  (d_c does not commute)") << "\n";
    }
  }
  r.j["checks"] = jc;
}

// ---------------------------------------------------------------- extend

json extension_json(const CentralExtension& e, const Group& base) {
  json j;
  j["cocycle"] = base.to_string(e.cocycle);
  j["trivial"] = e.trivial;
  if (e.primitive) j["eta"] = base.to_string(*e.primitive);
  j["algebra"] = algebra_json(*e.extended);
  j["homogeneous"] = e.homogeneous;
  j["graded"] = e.graded;
  j["stratifiable"] = e.stratifiable;
  j["layer_one_generates"] = e.layer_one_generates;
  return j;
}

void print_extension(std::ostream& os, const CentralExtension& e, const Group& base,
                     const std::string& indent = "  ") {
  const auto& a = *e.extended;
  os << indent << "cocycle ω = " << base.to_string(e.cocycle) << "\n";
  if (e.trivial)
    os << indent << "trivial extension, η = " << base.to_string(*e.primitive) << " (d0 η = ω)\n";
  else
    os << indent << "non-trivial class in H^2\n";
  os << indent << "extended algebra: dimension " << a.dim() << ", weights " << weights_text(a) << "\n";
  os << indent << "  " << algebra_brackets(a) << "\n";
  os << indent << (e.homogeneous ? "homogeneous cocycle" : "non-homogeneous cocycle")
     << (e.graded ? ", graded" : ", no positive grading") << ", "
     << (e.stratifiable ? "stratifiable" : "non-stratifiable")
     << (e.stratifiable && !e.layer_one_generates ? " (layer 1 of these weights does not generate)" : "")
     << "\n";
}

void cmd_extend(const std::filesystem::path& path, const CommandOptions& opt, Report& r) {
  Scenario s = load_scenario(path);
  if (!s.extend_cocycle) throw InputError(path.string() + ": [extend] needs a cocycle");
  const auto& nf = s.form(*s.extend_cocycle);
  GroupPtr g = usable(s.group_of(nf), opt);
  FiberForm omega = to_invariant(nf.form, "cocycle " + nf.name);
  if (omega.degree() != 2) throw InputError("cocycle " + nf.name + " must be a 2-form");
  r.j["scenario"] = s.title;
  r.j["group"] = s.group_of(nf).name;
  r.t << "scenario " << s.title << ": central extension of " << s.group_of(nf).name << "\n";

  if (!cocycle_check(*g, omega)) {
    r.j["cocycle"] = {{"form", g->to_string(omega)}, {"status", "FAIL"},
                      {"d0", g->to_string(g->fiber().d0(omega))}};
    r.t << "FAIL ω = " << g->to_string(omega) << " is not a cocycle: d0 ω = "
        << g->to_string(g->fiber().d0(omega)) << "\n";
    r.fail();
    return;
  }
  auto e = central_extend(g, omega, false, s.extend_label);
  r.j["extension"] = extension_json(e, *g);
  print_extension(r.t, e, *g);
  auto v = validate_algebra(*e.extended);
  r.j["extension"]["validation"] = {{"failures", v.failures},
                                    {"generated_by_layer_one", v.generated_by_layer_one},
                                    {"homogeneous_dimension", v.homogeneous_dimension}};
  r.t << "  validation: " << v.summary() << ", Q=" << v.homogeneous_dimension << "\n";
  if (!v.lie_algebra_ok()) r.fail();

  if (s.extend_shift) {
    FiberForm mu = invariant_named(s, *s.extend_shift, s.form(*s.extend_shift).on_source);
    if (mu.degree() != 1) throw InputError("shift " + *s.extend_shift + " must be a 1-form");
    FiberForm shifted_omega = omega + g->fiber().d0(mu);
    auto shifted = central_extend(g, shifted_omega, false, s.extend_label);
    auto iso = coboundary_isomorphism(shifted, e, mu);
    PolyMatrix m = to_poly(iso.matrix, g->ring());
    r.j["isomorphism"] = {{"mu", g->to_string(mu)},
                          {"shifted_cocycle", g->to_string(shifted_omega)},
                          {"matrix", matrix_json(m)},
                          {"status", status(iso.ok())}};
    r.t << "cohomologous cocycle ω + d0 μ = " << g->to_string(shifted_omega) << " (μ = " << g->to_string(mu)
        << ")\n";
    r.t << "  Id + μ : ĝ_{ω+d0μ} -> ĝ_ω\n";
    print_matrix(r.t, m, "    ");
    r.t << "  isomorphism " << status(iso.ok()) << "\n";
    if (!iso.ok()) r.fail();
  }
}

// ---------------------------------------------------------------- lift

// Entries joining basis vectors of different weight in the extended gradings.
bool preserves_weights(const PolyMatrix& m, const StratifiedAlgebra& src, const StratifiedAlgebra& tgt) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (!m[i][j].is_zero() && tgt.weight(i) != src.weight(j)) return false;
  return true;
}

void print_lift(Report& r, const LiftedHom& l, const Group& g1) {
  r.j["lift"] = {{"scale", to_string(l.scale)},
                 {"eta", g1.to_string(l.eta)},
                 {"matrix", matrix_json(l.matrix)},
                 {"homomorphism", status(l.hom.brackets_ok)},
                 {"block_diagonal", l.hom.block_diagonal},
                 {"projection", status(l.projection_ok)}};
  r.t << "lifted homomorphism Φ(u, X) = (c u + η(X), φ X), c = " << to_string(l.scale)
      << ", η = " << g1.to_string(l.eta) << "\n";
  print_matrix(r.t, l.matrix);
  r.t << "  brackets preserved: " << status(l.hom.brackets_ok)
      << ", base layers preserved: " << (l.hom.block_diagonal ? "yes" : "no")
      << ", π∘Φ = φ∘π: " << status(l.projection_ok) << "\n";
  if (!l.hom.brackets_ok || !l.projection_ok) r.fail();
}

void cmd_lift(const std::filesystem::path& path, const CommandOptions& opt, Report& r) {
  Scenario s = load_scenario(path);
  usable(s.source, opt);
  usable(s.target, opt);
  const PolyMap& phi = need_map(s);
  if (!s.lift_cocycle) throw InputError(path.string() + ": [lift] needs a cocycle on the target");
  FiberForm zeta = invariant_named(s, *s.lift_cocycle, false);
  const Group& g1 = *phi.source;
  const Group& g2 = *phi.target;
  scenario_header(s, r);
  r.j["mode"] = s.lift_mode;

  if (s.lift_mode == "jacobian") {
    if (!s.lift_source_cocycle) throw InputError("jacobian lift needs source_cocycle");
    FiberForm omega1 = invariant_named(s, *s.lift_source_cocycle, true);
    for (const auto* f : {&omega1, &zeta})
      if (f->degree() != 2) throw InputError("lift cocycles must be 2-forms");
    auto e1 = central_extend(phi.source, omega1, false, s.extend_label);
    auto e2 = central_extend(phi.target, zeta, false, s.extend_label);
    r.j["source_extension"] = extension_json(e1, g1);
    r.j["target_extension"] = extension_json(e2, g2);
    r.t << "source extension:\n";
    print_extension(r.t, e1, g1);
    r.t << "target extension:\n";
    print_extension(r.t, e2, g2);
    PolyMatrix jac = adapted_jacobian(phi);
    r.j["jacobian"] = matrix_json(jac);
    r.t << "differential of φ:\n";
    print_matrix(r.t, jac);
    auto res = lift_homomorphism(g1, g2, jac, omega1, zeta, LiftOptions{s.lift_rescale});
    if (!res.ok()) {
      std::string ob = res.obstruction ? g1.to_string(*res.obstruction) : "?";
      r.j["lift"] = {{"status", "FAIL"}, {"obstruction", ob}};
      r.t << "FAIL no lift: ω1 - φ*ζ has a component outside Im d0: " << ob << "\n";
      r.fail();
      return;
    }
    print_lift(r, *res.lift, g1);
    return;
  }

  int D = bounded(s.lift_bound ? s.lift_bound : opt.coeff_degree, 4, opt.max_degree, "coefficient degree");
  auto wf = lift_pansu_workflow(phi, zeta, D);
  r.j["coeff_degree"] = D;
  json js = json::array();
  for (const auto& st : wf.steps) {
    json e;
    e["weight"] = st.weight;
    e["component"] = g2.to_string(st.component);
    if (st.alpha) {
      e["alpha"] = g2.to_string(*st.alpha);
      e["pulled"] = g1.to_string(st.pulled);
      e["image"] = g1.to_string(st.image);
    }
    js.push_back(e);
    r.t << "ω_" << st.weight << " = " << g2.to_string(st.component) << "\n";
    if (st.alpha) {
      r.t << "  α_" << st.weight - 1 << " = " << g2.to_string(*st.alpha) << "\n";
      r.t << "  φ*α_" << st.weight - 1 << " = " << g1.to_string(st.pulled) << "\n";
      r.t << "  d_c^" << st.weight - 1 << " φ*α_" << st.weight - 1 << " = " << g1.to_string(st.image) << "\n";
    } else {
      r.t << "  no primitive with coefficient degree <= " << D << "\n";
    }
  }
  r.j["steps"] = js;
  r.j["zeta_prime"] = g1.to_string(wf.zeta_prime);
  r.j["pulled_omega"] = g1.to_string(wf.pulled_omega);
  r.j["commutes_mod_d0"] = wf.commutes_mod_d0;
  r.j["left_invariant"] = wf.left_invariant;
  r.t << "ζ' = " << g1.to_string(wf.zeta_prime) << "\n";
  r.t << "φ*ω = " << g1.to_string(wf.pulled_omega) << "\n";
  r.t << "φ*ω - ζ' ∈ Im d0: " << (wf.commutes_mod_d0 ? "yes" : "no")
      << ", ζ' left-invariant: " << (wf.left_invariant ? "yes" : "no") << "\n";
  if (wf.residual) r.t << "  non-constant part: " << g1.to_string(*wf.residual) << "\n";
  if (wf.target_extension) {
    r.j["target_extension"] = extension_json(*wf.target_extension, g2);
    r.t << "target extension:\n";
    print_extension(r.t, *wf.target_extension, g2);
  }
  if (wf.source_extension) {
    r.j["source_extension"] = extension_json(*wf.source_extension, g1);
    r.t << "source extension:\n";
    print_extension(r.t, *wf.source_extension, g1);
  }
  if (!wf.ok()) {
    r.j["failure"] = wf.failure.value_or("lift failed");
    r.t << "FAIL " << wf.failure.value_or("lift failed") << "\n";
    r.fail();
    return;
  }
  print_lift(r, *wf.lift, g1);
  if (wf.source_extension && wf.target_extension) {
    bool graded = preserves_weights(wf.lift->matrix, *wf.source_extension->extended,
                                    *wf.target_extension->extended);
    r.j["lift"]["extended_weights_preserved"] = graded;
    r.t << "  extended weights preserved: " << (graded ? "yes" : "no") << "\n";
  }
}

}  // namespace

std::pair<int, int> parse_degree_range(const std::string& text) {
  auto num = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("bad degree range '" + text + "'");
    return std::stoi(s);
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int k = num(text);
    return {k, k};
  }
  return {num(text.substr(0, dots)), num(text.substr(dots + 2))};
}

int max_degree_from_env() {
  const char* v = std::getenv("CARNOT_MAX_DEGREE");
  if (!v || !*v) return 8;
  std::string s(v);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 3)
    throw InputError("CARNOT_MAX_DEGREE must be a non-negative integer");
  return std::stoi(s);
}

CommandResult run_command(const std::string& cmd, const std::filesystem::path& input,
                          const CommandOptions& opt) {
  Report r;
  r.j["command"] = cmd;
  r.j["input"] = input.generic_string();
  try {
    if (cmd == "check") cmd_check(input, opt, r);
    else if (cmd == "rumin") cmd_rumin(input, opt, r);
    else if (cmd == "pansu") cmd_pansu(input, opt, r);
    else if (cmd == "commute") cmd_commute(input, opt, r);
    else if (cmd == "extend") cmd_extend(input, opt, r);
    else if (cmd == "lift") cmd_lift(input, opt, r);
    else throw InputError("unknown command '" + cmd + "'");
    r.j["status"] = r.code == 0 ? "PASS" : "FAIL";
  } catch (const TruncationError& e) {
    r.code = 1;
    r.j["status"] = "FAIL";
    r.j["error"] = e.what();
    r.t << "FAIL " << e.what() << "\n";
  } catch (const Error& e) {
    // parse errors, invalid inputs, violated preconditions
    r.code = 2;
    r.j["status"] = "ERROR";
    r.j["error"] = e.what();
    r.t.str("");
    r.t << "error: " << e.what() << "\n";
  }
  r.j["exit_code"] = r.code;
  return {r.code, r.t.str(), r.j.dump(2) + "\n"};
}

}  // namespace carnot
