#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "carnot/commands.hpp"
#include "carnot/io.hpp"

using namespace carnot;
using json = nlohmann::ordered_json;

namespace {

const std::filesystem::path root = CARNOT_SOURCE_DIR;

std::string scen(const std::string& name) { return (root / "scenarios" / (name + ".toml")).string(); }
std::string grp(const std::string& name) { return (root / "scenarios" / "groups" / (name + ".toml")).string(); }
std::string data(const std::string& name) { return (root / "tests" / "data" / (name + ".toml")).string(); }

CommandResult run(const std::string& cmd, const std::string& path, CommandOptions opt = {}) {
  return run_command(cmd, path, opt);
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

// Exit status of the carnot binary.
int shell(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(CARNOT_BIN) + " " + args + " >/dev/null 2>&1";
  int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("check: Heisenberg and h1 x R") {
  auto r = run("check", grp("h1"));
  CHECK(r.exit_code == 0);
  CHECK(has(r.text, "valid Carnot algebra, Q=4"));
  CHECK(has(r.text, "multicomplex OK"));
  CHECK(has(r.text, "k=2, weight 3: θ1∧τ, θ2∧τ"));

  auto x = run("check", grp("h1xR"));
  CHECK(x.exit_code == 0);
  CHECK(has(x.text, "Q=5"));
  CHECK(has(x.text, "k=1, weight 1: θ1, θ2, θ3"));
  CHECK(has(x.text, "k=2, weight 2: θ1∧θ3, θ2∧θ3"));
  CHECK(has(x.text, "k=2, weight 3: θ1∧τ, θ2∧τ"));
  auto j = json::parse(x.json);
  CHECK(j["validation"]["homogeneous_dimension"] == 5);
  CHECK(j["multicomplex"]["status"] == "PASS");
  for (const auto& row : j["hodge"])
    CHECK(row["dim"].get<int>() ==
          row["image_d0"].get<int>() + row["harmonic"].get<int>() + row["image_delta0"].get<int>());
}

TEST_CASE("check: homogeneous mode and --strict-stratified") {
  auto lenient = run("check", grp("nonstrat5"));
  CHECK(lenient.exit_code == 0);
  CHECK(has(lenient.text, "homogeneous mode"));
  CHECK(has(lenient.text, "Q=9"));
  CommandOptions strict;
  strict.strict_stratified = true;
  auto s = run("check", grp("nonstrat5"), strict);
  CHECK(s.exit_code == 1);
  CHECK(has(s.text, "FAIL not stratified"));
  CHECK(run("check", grp("h1"), strict).exit_code == 0);
  // other commands refuse the group outright
  CHECK(run("pansu", scen("nonstrat-5dim"), strict).exit_code == 2);
}

TEST_CASE("check: input errors carry line and column") {
  auto r = run("check", data("bad-brackets"));
  CHECK(r.exit_code == 2);
  CHECK(has(r.text, "bad-brackets.toml:5:16"));
  CHECK(has(r.text, "out of range"));

  auto s = run("check", data("bad-syntax"));
  CHECK(s.exit_code == 2);
  CHECK(has(s.text, "bad-syntax.toml:3:"));

  try {
    parse_group("dimension = 2\nlayers = [[1, 2]]\nbrackets = [{ i = 1, j = 2, value = [[1, \"1/0\"]] }]\n",
                "inline");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
  CHECK_THROWS_AS(parse_group("dimension = 2\nlayers = [[1, 1]]\n"), ParseError);
  CHECK_THROWS_AS(parse_group("dimension = 2\nlayers = [[1, 2]]\nbrackets = [{ i = 1, j = 1, value = [] }]\n"),
                  ParseError);

  auto p = run("pansu", data("bad-poly"));
  CHECK(p.exit_code == 2);
  CHECK(has(p.text, "bad-poly.toml:2:20"));
  CHECK(has(p.text, "unknown variable 'y'"));

  CHECK(run("check", data("does-not-exist")).exit_code == 2);
}

TEST_CASE("check: a bracket table that violates the axioms is a mathematical failure") {
  auto r = run("check", data("not-jacobi"));
  CHECK(r.exit_code == 1);
  CHECK(has(r.text, "FAIL grading violated"));
  // and an input error for commands that need the group
  CHECK(run("rumin", data("not-jacobi")).exit_code == 2);
}

TEST_CASE("rumin: symbolic d_c on h1 x R") {
  CommandOptions opt;
  opt.degrees = {1, 2};
  opt.coeff_degree = 2;
  auto r = run("rumin", grp("h1xR"), opt);
  CHECK(r.exit_code == 0);
  CHECK(has(r.text, "d_c(f·θ3) = X1f·θ1∧θ3 + X2f·θ2∧θ3"));
  CHECK(has(r.text, "d_c(f·θ2) = X1X1f·θ1∧τ - X3f·θ2∧θ3 + (X2X1f - Tf)·θ2∧τ"));
  CHECK(has(r.text, ": PASS"));
  auto j = json::parse(r.json);
  CHECK(j["dc_squared"]["status"] == "PASS");
  CHECK(j["complex"][0]["forms"][1]["by_order"]["1"] == "-X3f·θ2∧θ3");
}

TEST_CASE("rumin: E0 of h1 in degree 2 and of R3") {
  CommandOptions opt;
  opt.degrees = {2, 2};
  auto r = run("rumin", grp("h1"), opt);
  auto j = json::parse(r.json);
  REQUIRE(j["complex"].size() == 1);
  std::vector<std::string> forms;
  for (const auto& f : j["complex"][0]["forms"]) forms.push_back(f["form"]);
  CHECK(forms == std::vector<std::string>{"θ1∧τ", "θ2∧τ"});

  auto a = json::parse(run("rumin", grp("r3")).json);
  std::size_t count = 0;
  for (const auto& k : a["complex"]) count += k["forms"].size();
  CHECK(count == 8);  // every invariant form: d0 = 0

  opt.degrees = {2, 9};
  CHECK(run("rumin", grp("h1"), opt).exit_code == 2);
  CHECK_THROWS_AS(parse_degree_range("1..x"), InputError);
  CHECK(parse_degree_range("1..3") == std::pair{1, 3});
  CHECK(parse_degree_range("2") == std::pair{2, 2});
}

TEST_CASE("pansu: the h1 x R contact map") {
  auto r = run("pansu", scen("h1xR-dcfail"));
  CHECK(r.exit_code == 0);
  CHECK(has(r.text, "contact OK"));
  CHECK(has(r.text, "φ*θ3 = θ2 + θ3"));
  auto j = json::parse(r.json);
  json m = json::array({json::array({"1", "0", "0", "0"}), json::array({"0", "1", "0", "0"}),
                        json::array({"0", "1", "1", "0"}), json::array({"0", "0", "0", "1"})});
  CHECK(j["pansu_derivative"]["matrix"] == m);
  CHECK(j["pansu_derivative"]["mode"] == "identity");
}

TEST_CASE("pansu: non-contact maps print their violated equations") {
  auto r = run("pansu", data("noncontact"));
  CHECK(r.exit_code == 1);
  CHECK(has(r.text, "violated: a(T, X1) = 1/2·x2"));
  CHECK(has(r.text, "violated: a(T, X2) = -1/2·x1"));
  CHECK(json::parse(r.json)["contact"]["violations"].size() == 2);
}

TEST_CASE("pansu: identity") {
  auto r = run("pansu", data("identity-h1"));
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.json);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) CHECK(j["pansu_derivative"]["matrix"][i][k] == (i == k ? "1" : "0"));
  CHECK(has(r.text, "φ*alpha = φ*(x1·θ2) = x1·θ2"));
}

TEST_CASE("pansu: 0-form discrepancy on the contact family") {
  auto j = json::parse(run("pansu", scen("h1-contact-family")).json);
  // (X1 g∘φ Tφ1 + X2 g∘φ Tφ2) τ with Tφ = (1, 2s), s = x1 + t
  CHECK(j["exterior_discrepancy"][0]["discrepancy"] == "τ");
  CHECK(j["exterior_discrepancy"][1]["discrepancy"] == "(2·t + 2·x1)·τ");
  CHECK(j["exterior_discrepancy"][2]["discrepancy"] == "(7/2·t^2 + 7·x1·t + 7/2·x1^2)·τ");
}

TEST_CASE("commute: h1 x R example passes with certificates and shows the d_c discrepancy") {
  auto r = run("commute", scen("h1xR-dcfail"));
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.json);
  std::map<std::pair<std::string, int>, std::string> st;
  for (const auto& c : j["checks"]) st[{c["form"], c["page"]}] = c["status"];
  CHECK(st[{"alpha", 1}] == "PASS");
  CHECK(st[{"alpha", 2}] == "SKIP");
  CHECK(st[{"beta", 1}] == "PASS");
  CHECK(st[{"beta", 2}] == "PASS");
  CHECK(st[{"closed", 1}] == "PASS");
  CHECK(st[{"closed", 2}] == "PASS");
  const auto& d = j["dc_discrepancy"][0];
  CHECK(d["form"] == "alpha");
  CHECK(d["lhs"] == "2·x1·θ1∧θ3 + 2·θ1∧τ");
  CHECK(d["rhs"] == "2·x1·θ1∧θ2 + 2·x1·θ1∧θ3");
  CHECK(d["projected"] == "2·θ1∧τ");
  CHECK(d["commutes"] == false);

  CommandOptions one;
  one.page = 1;
  auto p = json::parse(run("commute", scen("h1xR-dcfail"), one).json);
  for (const auto& c : p["checks"]) CHECK(c["page"] == 1);
}

TEST_CASE("commute: certificates on a degenerate contact map") {
  auto j = json::parse(run("commute", scen("h1-contact-family")).json);
  bool saw = false;
  for (const auto& c : j["checks"])
    if (c["form"] == "alpha" && c["page"] == 1) {
      saw = true;
      CHECK(c["status"] == "PASS");
      CHECK(c["difference"] == "(-t^2 - 2·x1·t - x1^2)·θ1∧θ2");
      CHECK(c["certificate"][0]["form"] == "(t^2 + 2·x1·t + x1^2)·τ");
    }
  CHECK(saw);
}

TEST_CASE("commute: explicit witness chains") {
  auto good = run("commute", data("chain-good"));
  CHECK(good.exit_code == 0);
  CHECK(json::parse(good.json)["checks"][0]["status"] == "PASS");
  auto bad = run("commute", data("chain-corrupt"));
  CHECK(bad.exit_code == 2);
  CHECK(has(bad.text, "does not satisfy"));
}

TEST_CASE("commute: bounds beyond CARNOT_MAX_DEGREE fail instead of clipping") {
  CommandOptions opt;
  opt.max_degree = 3;
  auto r = run("commute", scen("h1-contact-family"), opt);
  CHECK(r.exit_code == 1);
  CHECK(has(r.text, "exceeds CARNOT_MAX_DEGREE=3"));
  opt.coeff_degree = 4;
  CHECK(run("commute", scen("h1-contact-family"), opt).exit_code == 2);
}

TEST_CASE("extend: area form on R2 gives h1") {
  auto j = json::parse(run("extend", scen("intro-R2")).json);
  CHECK(j["extension"]["algebra"]["brackets"] == "[X1,X2] = T");
  CHECK(j["extension"]["algebra"]["weights"] == json::array({1, 1, 2}));
  CHECK(j["extension"]["trivial"] == false);
  CHECK(j["extension"]["stratifiable"] == true);
}

TEST_CASE("extend: the non-stratifiable 5-dimensional algebra and a verified isomorphism") {
  auto r = run("extend", scen("h1xR-extension"));
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.json);
  CHECK(j["extension"]["algebra"]["brackets"] == "[X1,X2] = T, [X1,T] = W, [X2,X3] = W");
  CHECK(j["extension"]["stratifiable"] == false);
  CHECK(j["extension"]["graded"] == true);
  CHECK(j["isomorphism"]["status"] == "PASS");
  CHECK(j["isomorphism"]["shifted_cocycle"] == "-θ1∧θ2 + θ1∧τ + θ2∧θ3");
  CHECK(has(r.text, "non-stratifiable"));
}

TEST_CASE("extend: trivial cocycle") {
  auto r = run("extend", scen("h1-trivial-cocycle"));
  CHECK(has(r.text, "trivial extension, η = -τ"));
  CHECK(json::parse(r.json)["extension"]["eta"] == "-τ");
}

TEST_CASE("lift: planar map with the determinant in the corner") {
  auto r = run("lift", scen("intro-R2"));
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.json);
  json m = json::array({json::array({"2·x1", "1", "0"}), json::array({"-1", "1", "0"}),
                        json::array({"0", "0", "2·x1 + 1"})});
  CHECK(j["lift"]["matrix"] == m);
  CHECK(j["lift"]["homomorphism"] == "PASS");
}

TEST_CASE("lift: primitive workflow on h1 x R") {
  auto r = run("lift", scen("h1xR-extension"));
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.json);
  CHECK(j["zeta_prime"] == "θ1∧τ + θ2∧θ3");
  CHECK(j["left_invariant"] == true);
  CHECK(j["lift"]["extended_weights_preserved"] == false);
  CHECK(j["source_extension"]["algebra"]["brackets"] == "[X1,X2] = T, [X1,T] = W, [X2,X3] = W");
  CommandOptions opt;
  opt.coeff_degree = 1;
  // the scenario's own bound wins over the flag
  CHECK(run("lift", scen("h1xR-extension"), opt).exit_code == 0);
}

TEST_CASE("reports are deterministic and round-trip through JSON") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"check", grp("h1xR")},        {"rumin", grp("h1")},
      {"pansu", scen("h1xR-dcfail")}, {"commute", scen("h1xR-dcfail")},
      {"extend", scen("h1xR-extension")}, {"lift", scen("intro-R2")},
      {"lift", scen("h1xR-extension")},  {"check", data("bad-brackets")}};
  for (const auto& [cmd, path] : cases) {
    CAPTURE(cmd);
    CAPTURE(path);
    auto a = run(cmd, path), b = run(cmd, path);
    CHECK(a.text == b.text);
    CHECK(a.json == b.json);
    auto parsed = json::parse(a.json);
    CHECK(parsed.dump(2) + "\n" == a.json);
    CHECK(json::parse(parsed.dump()) == parsed);
    CHECK(parsed["exit_code"] == a.exit_code);
  }
}

TEST_CASE("binary: exit codes and --json") {
  CHECK(shell("check " + grp("h1")) == 0);
  CHECK(shell("--strict-stratified check " + grp("nonstrat5")) == 1);
  CHECK(shell("check " + data("bad-brackets")) == 2);
  CHECK(shell("pansu " + data("noncontact")) == 1);
  CHECK(shell("commute " + data("chain-corrupt")) == 2);
  CHECK(shell("frobnicate " + grp("h1")) == 2);
  CHECK(shell("commute " + scen("h1-contact-family"), "CARNOT_MAX_DEGREE=3") == 1);
  CHECK(shell("check " + grp("h1"), "CARNOT_MAX_DEGREE=abc") == 2);
  CHECK(shell("rumin " + grp("h1xR") + " --degrees 1..2 --coeff-degree 1") == 0);

  auto out = (std::filesystem::temp_directory_path() / "carnot_cli_test.json").string();
  std::filesystem::remove(out);
  CHECK(shell("--json " + out + " lift " + scen("intro-R2")) == 0);
  CHECK(slurp(out) == run("lift", scen("intro-R2")).json);
  std::filesystem::remove(out);
}
