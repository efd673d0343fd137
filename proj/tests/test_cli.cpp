#include <gtest/gtest.h>

#include <sstream>

#include "cotor/cli.hpp"
#include "cotor/sampling.hpp"

using namespace cotor;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

const char* kDemo = R"(
ring Z Z
module M over Z gens 1 rels [[4]]
module N over Z gens 1 rels [[6]]
module R over Z gens 1 rels []
map id : R -> R matrix [[1]]
map two : R -> R matrix [[2]]
complex S over Z degrees 0..0 object 0 R
complex D over Z degrees 0..1 object 0 R object 1 R diff 1 id
complex O over Z degrees 0..0
chainmap inc : S -> D comp 0 id
chainmap top : S -> D comp 0 id
chainmap twice : S -> D comp 0 two
chainmap zd : D -> O
chainmap idD : D -> D comp 0 id comp 1 id
liftproblem good i inc p zd top top bottom zd
)";

// Text for a complex: one module per degree, one map per differential.
std::string complex_text(const ChainComplex& X, const std::string& tag, const std::string& ring) {
  std::ostringstream o;
  for (int n = X.lo(); n <= X.hi(); ++n)
    o << "module " << tag << "m" << n - X.lo() << " over " << ring << " gens " << X.obj(n).gens() << " rels "
      << cotor::detail::rows_str(cotor::detail::rows_of(X.obj(n).relations())) << "\n";
  for (int n = X.lo() + 1; n <= X.hi(); ++n)
    o << "map " << tag << "d" << n - X.lo() << " : " << tag << "m" << n - X.lo() << " -> " << tag << "m" << n - 1 - X.lo()
      << " matrix " << cotor::detail::rows_str(cotor::detail::rows_of(X.d(n))) << "\n";
  o << "complex " << tag << " over " << ring << " degrees " << X.lo() << ".." << X.hi();
  for (int n = X.lo(); n <= X.hi(); ++n) o << " object " << n << ' ' << tag << "m" << n - X.lo();
  for (int n = X.lo() + 1; n <= X.hi(); ++n) o << " diff " << n << ' ' << tag << "d" << n - X.lo();
  return o.str() + "\n";
}

}  // namespace

TEST(Workspace, Examples) {
  Workspace ws = parse_workspace("ring Z Z\nmodule M over Z gens 1 rels [[2]]\ncomplex X over Z degrees 0..0 object 0 M\n");
  EXPECT_EQ(ws.size(), 3u);
  EXPECT_EQ(describe(homology(ws.complex("X"), 0)), "Z/2");

  try {
    parse_workspace(
        "ring Z Z\nmodule R over Z gens 1 rels []\nmap id : R -> R matrix [[1]]\n"
        "complex X over Z degrees 0..2 object 0 R object 1 R object 2 R diff 1 id diff 2 id\n");
    FAIL() << "d^2 != 0 accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("d_1 d_2"), std::string::npos) << e.what();
  }

  try {
    parse_workspace("ring Z Z\n\nmodule M over Q gens 1 rels [[2]]\n");
    FAIL() << "dangling reference accepted";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("Q"), std::string::npos);
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.col(), 1u);
  }
}

TEST(Workspace, Diagnostics) {
  auto parse_error_at = [](const std::string& text, std::size_t line, std::size_t col) {
    try {
      parse_workspace(text);
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
      EXPECT_EQ(e.col(), col) << e.what();
      return;
    }
    ADD_FAILURE() << "no ParseError for " << text;
  };
  parse_error_at("ring Z Zmod\n", 2, 1);
  parse_error_at("ring Z Z\nmodule M over Z gens 1 rels [[2,]]\n", 2, 33);
  parse_error_at("ring Z Z # comment\n  frobnicate\n", 2, 3);
  parse_error_at("ring Z Z\nring Z Z\n", 2, 1);
  parse_error_at("ring Z Z\nmodule M over Z gens 1 rels [[2]] $\n", 2, 35);

  EXPECT_THROW(parse_workspace("ring R Zmod 1\n"), ValidationError);
  EXPECT_THROW(parse_workspace("ring R Fp 4\n"), ValidationError);
  EXPECT_THROW(parse_workspace("ring Z Z\nmodule M over Z gens 2 rels [[2]]\n"), ValidationError);
  // a map that does not respect relations
  EXPECT_THROW(parse_workspace("ring Z Z\nmodule A over Z gens 1 rels [[2]]\nmodule B over Z gens 1 rels []\n"
                               "map f : A -> B matrix [[1]]\n"),
               ValidationError);
  // a chain map that does not commute
  std::string bad = std::string(kDemo) + "liftproblem bad i inc p idD top twice bottom idD\n";
  EXPECT_THROW(parse_workspace(bad), ValidationError);
  // referring to a module where a ring is expected
  EXPECT_THROW(parse_workspace("ring Z Z\nmodule M over Z gens 1\ncomplex X over M degrees 0..0\n"), ParseError);
}

TEST(Workspace, QuiverDeclarations) {
  std::string text =
      "ring Z6 Zmod 6\nring F2 Zmod 2\nmodule A over Z6 gens 1 rels []\nmodule B over F2 gens 1 rels []\n"
      "map e1 : A -> B matrix [[1]]\nmap z : A -> B matrix [[0]]\n"
      "quiver Q vertices v:Z6 w:F2 edges e: v -> w ringmap [1]\n"
      "repmodule M over Q at v A at w B edge e e1\nrepmodule Z over Q at v A at w B edge e z\n";
  Workspace ws = parse_workspace(text);
  EXPECT_TRUE(is_quasi_coherent(ws.repmodule("M")).ok);
  EXPECT_FALSE(is_quasi_coherent(ws.repmodule("Z")).ok);
  EXPECT_THROW(parse_workspace("ring A Zmod 4\nring B Zmod 3\nquiver Q vertices v:A w:B edges e: v -> w ringmap [1]\n"),
               ValidationError);
  EXPECT_THROW(parse_workspace("ring A Zmod 4\nring B Zmod 2\nquiver Q vertices v:A w:B edges e: v -> u ringmap [1]\n"),
               ValidationError);
  EXPECT_EQ(parse_workspace(serialize(ws)), ws);
}

TEST(Workspace, RoundTrip) {
  Workspace demo = parse_workspace(kDemo);
  EXPECT_EQ(parse_workspace(serialize(demo)), demo);
  EXPECT_EQ(serialize(parse_workspace(serialize(demo))), serialize(demo));

  Rng rng(5);
  std::vector<std::pair<Ring, std::string>> rings = {{Ring::integers(), "ring R Z"},
                                                     {Ring::integers_mod(4), "ring R Zmod 4"},
                                                     {Ring::prime_field(3), "ring R Fp 3"}};
  for (int t = 0; t < 60; ++t) {
    auto& [r, decl] = rings[t % 3];
    ChainComplex X = random_complex(rng, r);
    if (X.empty()) continue;
    std::string text = decl + "\n" + complex_text(X, "X", "R");
    Workspace ws = parse_workspace(text);
    EXPECT_TRUE(ws.complex("X") == X) << text;
    Workspace again = parse_workspace(serialize(ws));
    EXPECT_EQ(again, ws);
    EXPECT_TRUE(again.complex("X") == X);
  }
}

TEST(Cli, TorTableMatchesModules) {
  std::string path = write_temp("tor.cl", kDemo);
  Outcome r = run({"tor", "--workspace", path, "--a", "M", "--b", "N", "--max-degree", "3", "--emit", "machine"});
  ASSERT_EQ(r.code, 0) << r.err;
  Report rep = Report::from_json(r.out);
  FpModule M = FpModule::cyclic(Ring::integers(), 4), N = FpModule::cyclic(Ring::integers(), 6);
  ASSERT_EQ(rep.checks.size(), 4u);
  for (std::size_t n = 0; n <= 3; ++n) {
    EXPECT_EQ(rep.checks[n].name, "Tor_" + std::to_string(n) + "(M,N)");
    EXPECT_EQ(rep.checks[n].witness, describe(tor_n(M, N, n)));
  }
}

TEST(Cli, ExitCodes) {
  std::string path = write_temp("codes.cl", kDemo);
  EXPECT_EQ(run({"model-check", "--structure", "projective", "--ring", "Zmod4", "--seed", "1", "--samples", "50"}).code, 0);

  std::string bad = write_temp("bad.cl", std::string(kDemo) + "liftproblem P i inc p idD top twice bottom idD\n");
  Outcome lift = run({"lift", "--workspace", bad, "--problem", "P"});
  EXPECT_EQ(lift.code, 2);
  EXPECT_NE(lift.err.find("ValidationError"), std::string::npos) << lift.err;

  Outcome good = run({"lift", "--workspace", path, "--problem", "good"});
  EXPECT_EQ(good.code, 0) << good.err;

  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"tor", "--bogus"}).code, 2);
  EXPECT_EQ(run({"tor", "--workspace", "/nonexistent/w.cl", "--a", "M", "--b", "N"}).code, 2);
  EXPECT_EQ(run({"model-check", "--ring", "Zmod1"}).code, 2);
  EXPECT_EQ(run({"replace", "--workspace", path, "--complex", "S", "--structure", "injective"}).code, 2);

  // violations give exit 1
  Outcome sab = run({"monoidal-check", "--ring", "Z", "--sabotage", "--samples", "10", "--emit", "machine"});
  EXPECT_EQ(sab.code, 1);
  Report rep = Report::from_json(sab.out);
  bool found = false;
  for (auto& c : rep.checks)
    if (c.name == "(1) left objects flat") {
      found = true;
      EXPECT_EQ(c.status, "fail");
      EXPECT_NE(c.witness.find("Z/2"), std::string::npos);
    }
  EXPECT_TRUE(found);
}

TEST(Cli, Subcommands) {
  std::string path = write_temp("subs.cl", std::string(kDemo) +
                                               "module R2 over Z gens 2 rels []\nmap sub : R -> R2 matrix [[1],[0]]\n"
                                               "chainmap Dd : D -> D comp 0 id comp 1 id\n");
  std::vector<std::vector<std::string>> cmds = {
      {"resolve", "--module", "M"},
      {"ext", "--a", "M", "--b", "N"},
      {"tensor", "--a", "M", "--b", "N"},
      {"factor", "--map", "twice", "--structure", "flat"},
      {"replace", "--complex", "S", "--structure", "flat"},
      {"derived-tensor", "--a", "S", "--b", "D", "--structure", "projective"},
      {"kaplansky-filtrate", "--map", "sub", "--class", "projective"},
      {"envelope", "--map", "Dd", "--structure", "flat"},
  };
  for (auto c : cmds) {
    c.insert(c.begin() + 1, {"--workspace", path});
    Outcome r = run(c);
    EXPECT_EQ(r.code, 0) << c[0] << "\n" << r.out << r.err;
  }
  Outcome compat = run({"compat-check", "--pair", "wrong", "--ring", "Z", "--samples", "20"});
  EXPECT_EQ(compat.code, 1);
  EXPECT_EQ(run({"compat-check", "--pair", "flat", "--ring", "Z", "--samples", "20"}).code, 0);
}

TEST(Report, MachineFormRoundTrips) {
  Report r;
  r.command = "x --y";
  r.seed = 42;
  r.pass("a");
  r.fail("b", "w \"quoted\"");
  r.info("c", "Z/2 + Z");
  r.wall_seconds = 3.5;
  Report back = Report::from_json(r.machine());
  EXPECT_EQ(back.command, r.command);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.checks, r.checks);
  EXPECT_EQ(back.machine(), r.machine());
  EXPECT_EQ(r.machine().find("wall"), std::string::npos);
  EXPECT_TRUE(r.violations());
}

TEST(Report, DeterministicForFixedSeed) {
  std::vector<std::string> args = {"model-check", "--structure", "flat", "--ring", "Z", "--seed", "3", "--samples", "10",
                                   "--emit", "machine"};
  Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::string out = ::testing::TempDir() + "report.json";
  args.push_back("--out");
  args.push_back(out);
  run(args);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  Report rep = Report::from_json(ss.str());
  EXPECT_EQ(rep.seed, 3u);
  EXPECT_FALSE(rep.checks.empty());
}
