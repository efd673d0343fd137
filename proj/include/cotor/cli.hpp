#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cotor/report.hpp"
#include "cotor/workspace.hpp"

namespace cotor::cli {

struct Options {
  std::string workspace;
  std::uint64_t seed = 0;
  std::size_t samples = 50;
  std::size_t gamma = 3;
  std::size_t step_budget = 32;
  std::string window;
  std::string structure = "projective";
  std::string ring = "Z";
  std::string out;
  std::string emit = "text";

  std::string a, b, module, map, complex, problem, repmodule;
  std::string mode = "both", kind = "cofibrant", pair = "projective", cls = "projective";
  std::size_t max_degree = 3;
  bool sabotage = false;
};

/// Z, Zmod<n> or Fp<p>.
inline Ring parse_ring(const std::string& s) {
  auto num = [&](std::size_t from) {
    std::string t = s.substr(from);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) throw PreconditionFailed("bad ring " + s);
    return Int(t);
  };
  if (s == "Z") return Ring::integers();
  if (s.rfind("Zmod", 0) == 0) return Ring::integers_mod(num(4));
  if (s.rfind("Fp", 0) == 0) return Ring::prime_field(num(2));
  if (s.rfind("F", 0) == 0) return Ring::prime_field(num(1));
  throw PreconditionFailed("unknown ring " + s + " (use Z, Zmod<n> or Fp<p>)");
}

inline StructureId parse_structure(const std::string& s) {
  if (s == "projective") return StructureId::Projective;
  if (s == "flat") return StructureId::Flat;
  if (s == "injective") return StructureId::Injective;
  throw PreconditionFailed("unknown structure " + s);
}

inline ClassSpec parse_class(const std::string& s) {
  ClassSpec c;
  if (s == "projective") c.id = ClassId::Projective;
  else if (s == "flat") c.id = ClassId::Flat;
  else if (s == "injective") c.id = ClassId::Injective;
  else if (s == "all") c.id = ClassId::AllObjects;
  else throw PreconditionFailed("unknown class " + s);
  return c;
}

inline CotorsionPairSpec parse_pair(const std::string& s, const Ring& r) {
  if (s == "projective") return projective_pair(r);
  if (s == "flat") return flat_pair(r);
  if (s == "injective") return injective_pair(r);
  if (s == "wrong") return wrong_pair(r);
  throw PreconditionFailed("unknown pair " + s);
}

/// "lo..hi", or the given default when empty.
inline std::pair<int, int> parse_window(const std::string& s, std::pair<int, int> dflt) {
  if (s.empty()) return dflt;
  auto k = s.find("..");
  if (k == std::string::npos) throw PreconditionFailed("window must look like lo..hi");
  try {
    int lo = std::stoi(s.substr(0, k)), hi = std::stoi(s.substr(k + 2));
    if (lo > hi) throw PreconditionFailed("window needs lo <= hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw PreconditionFailed("window must look like lo..hi");
  }
}

inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const PreconditionFailed*>(&e)) return "PreconditionFailed";
  if (dynamic_cast<const UnsupportedRing*>(&e)) return "UnsupportedRing";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const NotInClass*>(&e)) return "NotInClass";
  if (dynamic_cast<const BudgetExceeded*>(&e)) return "BudgetExceeded";
  if (dynamic_cast<const CertificateMissing*>(&e)) return "CertificateMissing";
  if (dynamic_cast<const InternalError*>(&e)) return "InternalError";
  return "Error";
}

inline bool usage_error(const std::exception& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
         dynamic_cast<const PreconditionFailed*>(&e) || dynamic_cast<const UnsupportedRing*>(&e) ||
         dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const NotInClass*>(&e);
}

inline Workspace load_workspace(const std::string& path) {
  if (path.empty()) throw PreconditionFailed("this command needs --workspace");
  std::ifstream in(path);
  if (!in) throw PreconditionFailed("cannot read workspace " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workspace(ss.str());
}

namespace detail {

inline std::string need(const std::string& v, const char* flag) {
  if (v.empty()) throw PreconditionFailed(std::string("this command needs ") + flag);
  return v;
}

inline KaplanskyConfig config(const Options& o) { return KaplanskyConfig{o.gamma, o.step_budget}; }

inline void homology_table(Report& r, const ChainComplex& X, std::pair<int, int> w, const std::string& prefix) {
  for (int n = w.first; n <= w.second; ++n) r.info(prefix + "H_" + std::to_string(n), describe(homology(X, n)));
}

/// Cycles of S inside Z_n F and the quotient, both checked against the left class.
inline void certify_envelope(Report& r, const ChainComplex& F, const std::map<int, Matrix>& X, const Envelope& env,
                             const CotorsionPairSpec& pair) {
  const ChainComplex& S = env.inclusion.source();
  r.check("S exact", is_exact(S));
  r.check("S -> F mono", is_mono(env.inclusion));
  bool inside = true, cyc = true, quo = true;
  std::string w;
  for (auto& [n, m] : X) {
    Matrix img = env.inclusion.matrix(n);
    if (m.cols() && !cotor::detail::in_lattice(Matrix::hcat(img.lifted(), F.obj(n).lattice()), m.lifted())) inside = false;
  }
  for (int n = F.lo(); n <= F.hi(); ++n) {
    Matrix ZF = cycles(F, n);
    auto it = env.cycles.find(n);
    Matrix ZS = it == env.cycles.end() ? Matrix(F.ring(), F.obj(n).gens(), 0) : it->second;
    FpModule zs = present(F.ring(), ZS, F.obj(n).lattice());
    if (!pair.in_left(zs)) cyc = false, w = "Z_" + std::to_string(n) + " S = " + describe(zs);
    auto c = express_in(ZF, F.obj(n).lattice(), ZS, F.ring());
    if (!c) {
      quo = false;
      w = "Z_" + std::to_string(n) + " S not inside Z_" + std::to_string(n) + " F";
      continue;
    }
    FpModule zf = present(F.ring(), ZF, F.obj(n).lattice());
    FpModule q = quotient(zf, *c).target();
    if (!pair.in_left(q)) quo = false, w = "Z_" + std::to_string(n) + " F / Z_" + std::to_string(n) + " S = " + describe(q);
  }
  r.check("X inside S", inside);
  r.check("cycles of S in left class", cyc, w);
  r.check("cycle quotients in left class", quo, w);
  r.info("max generators", std::to_string(env.max_gens));
}

inline void run_factor(Report& r, const ChainMap& f, FactorMode mode, const ModelStructureSpec& spec) {
  std::string p = factor_mode_name(mode) + ": ";
  Factorization fz = factor_map(f, mode, spec);
  r.check(p + "composite equals f", fz.composes_exactly());
  r.check(p + "certificates revalidate", fz.revalidate(spec));
  r.info(p + "middle", fz.middle().str());
  if (fz.cells) {
    r.check(p + "cell chain composes", fz.cells->composes_exactly());
    r.check(p + "cells are pushouts", fz.cells->cells_are_pushouts());
    r.info(p + "cells", std::to_string(fz.cells->cells.size()));
  } else if (!fz.cells_note.empty()) {
    r.info(p + "cells", fz.cells_note);
  }
}

}  // namespace detail

/// Runs one subcommand and fills the report. Returns the exit code.
inline int execute(const std::string& cmd, const Options& o, Report& r) {
  auto cfg = detail::config(o);
  if (cmd == "resolve") {
    Workspace ws = load_workspace(o.workspace);
    const FpModule& M = ws.module(detail::need(o.module.empty() ? o.a : o.module, "--module"));
    FreeResolution res = free_resolution(M, o.max_degree);
    auto maps = res.maps();
    for (std::size_t k = 0; k < res.ranks.size(); ++k) r.info("rank F_" + std::to_string(k), std::to_string(res.ranks[k]));
    for (std::size_t k = 1; k < res.ranks.size(); ++k) r.info("d_" + std::to_string(k), res.d(k).str());
    bool exact = is_epi(maps[0]);
    for (std::size_t k = 0; k + 1 < maps.size(); ++k) exact = exact && is_zero(homology_at(maps[k + 1], maps[k]));
    r.check("resolution exact", exact);
  } else if (cmd == "ext" || cmd == "tor") {
    Workspace ws = load_workspace(o.workspace);
    const FpModule& A = ws.module(detail::need(o.a, "--a"));
    const FpModule& B = ws.module(detail::need(o.b, "--b"));
    for (std::size_t n = 0; n <= o.max_degree; ++n) {
      if (cmd == "ext") r.info("Ext^" + std::to_string(n) + "(" + o.a + "," + o.b + ")", describe(ext_n(A, B, n)));
      else r.info("Tor_" + std::to_string(n) + "(" + o.a + "," + o.b + ")", describe(tor_n(A, B, n)));
    }
  } else if (cmd == "tensor") {
    Workspace ws = load_workspace(o.workspace);
    r.info(o.a + " (x) " + o.b, describe(tensor_modules(ws.module(detail::need(o.a, "--a")), ws.module(detail::need(o.b, "--b")))));
  } else if (cmd == "factor") {
    Workspace ws = load_workspace(o.workspace);
    const ChainMap& f = ws.chainmap(detail::need(o.map, "--map"));
    auto spec = make_structure(parse_structure(o.structure), f.source().ring(), cfg);
    if (o.mode == "both" || o.mode == "cof") detail::run_factor(r, f, FactorMode::CofThenTrivFib, spec);
    if (o.mode == "both" || o.mode == "fib") detail::run_factor(r, f, FactorMode::TrivCofThenFib, spec);
    if (o.mode != "both" && o.mode != "cof" && o.mode != "fib") throw PreconditionFailed("--mode is cof, fib or both");
  } else if (cmd == "lift") {
    Workspace ws = load_workspace(o.workspace);
    const LiftProblem& p = ws.lift(detail::need(o.problem, "--problem"));
    auto spec = make_structure(parse_structure(o.structure), p.i.source().ring(), cfg);
    try {
      ChainMap h = solve_lifting(p, spec);
      r.check("h i = top", maps_equal(compose(h, p.i), p.top));
      r.check("p h = bottom", maps_equal(compose(p.p, h), p.bottom));
      const ChainComplex& B = p.i.target();
      for (int n = B.lo(); n <= B.hi(); ++n) r.info("h_" + std::to_string(n), h.matrix(n).str());
    } catch (const InternalError& e) {
      r.fail("lift exists", e.what());
    }
  } else if (cmd == "replace") {
    Workspace ws = load_workspace(o.workspace);
    const ChainComplex& X = ws.complex(detail::need(o.complex, "--complex"));
    auto spec = make_structure(parse_structure(o.structure), X.ring(), cfg);
    bool cof = o.kind == "cofibrant";
    if (!cof && o.kind != "fibrant") throw PreconditionFailed("--kind is cofibrant or fibrant");
    Replacement rep = cof ? cofibrant_replacement(X, spec) : fibrant_replacement(X, spec);
    r.info("replacement", rep.object.str());
    r.info("identity", rep.identity ? "yes" : "no");
    r.check("quasi-isomorphism", is_quasi_iso(rep.map));
    r.check(cof ? "replacement cofibrant" : "replacement fibrant",
            in_complex_class(rep.object, cof ? ComplexClass::DgFLeft : ComplexClass::DgCRight, spec.pair));
    detail::homology_table(r, rep.object, parse_window(o.window, {rep.object.lo(), rep.object.hi()}), "");
  } else if (cmd == "derived-tensor") {
    Workspace ws = load_workspace(o.workspace);
    const ChainComplex& X = ws.complex(detail::need(o.a, "--a"));
    const ChainComplex& Y = ws.complex(detail::need(o.b, "--b"));
    auto spec = make_structure(parse_structure(o.structure), X.ring(), cfg);
    DerivedTensor dt = derived_tensor(X, Y, spec);
    auto w = parse_window(o.window, {dt.product.lo(), dt.product.hi()});
    for (int n = w.first; n <= w.second; ++n) r.info("H_" + std::to_string(n), describe(dt.at(n)));
  } else if (cmd == "model-check" || cmd == "monoidal-check") {
    Ring ring = parse_ring(o.ring);
    ModelStructureSpec spec = o.sabotage ? sabotaged_structure(ring) : make_structure(parse_structure(o.structure), ring, cfg);
    auto checks = cmd == "model-check" ? check_model_axioms(spec, o.seed, o.samples) : check_monoidal(spec, o.seed, o.samples);
    for (auto& c : checks) r.add(c);
  } else if (cmd == "compat-check") {
    auto pair = parse_pair(o.pair, parse_ring(o.ring));
    auto rep = check_compatibility(pair, o.samples);
    for (auto& v : rep.verdicts) {
      std::string w;
      for (std::size_t k = 0; k < v.counterexamples.size() && k < 3; ++k) w += (k ? "; " : "") + v.counterexamples[k];
      r.check(v.name, v.pass, w);
    }
  } else if (cmd == "kaplansky-filtrate") {
    Workspace ws = load_workspace(o.workspace);
    const ModuleMap& incl = ws.map(detail::need(o.map, "--map"));
    FiltrationChain ch = kaplansky_filtration(incl, parse_class(o.cls), cfg);
    bool ok = true;
    std::string w;
    try {
      ch.validate(o.gamma);
    } catch (const Error& e) {
      ok = false;
      w = e.what();
    }
    r.check("filtration validates", ok, w);
    r.info("length", std::to_string(ch.length()));
    for (std::size_t k = 0; k < ch.quotients.size(); ++k) r.info("quotient " + std::to_string(k + 1), describe(ch.quotients[k]));
  } else if (cmd == "envelope") {
    Workspace ws = load_workspace(o.workspace);
    const ChainMap& iota = ws.chainmap(detail::need(o.map, "--map"));
    const ChainComplex& F = iota.target();
    std::map<int, Matrix> X;
    for (int n = F.lo(); n <= F.hi(); ++n) X[n] = iota.matrix(n);
    auto spec = make_structure(parse_structure(o.structure), F.ring(), cfg);
    Envelope env = flat_subcomplex_envelope(F, X, spec.pair, cfg);
    r.info("S", env.inclusion.source().str());
    detail::certify_envelope(r, F, X, env, spec.pair);
  } else if (cmd == "quiver-check") {
    Workspace ws = load_workspace(o.workspace);
    const QuiverRepModule& M = ws.repmodule(detail::need(o.repmodule, "--repmodule"));
    QcVerdict qc = is_quasi_coherent(M);
    bool flat = is_flat_rep_module(M);
    r.info("cardinality", rep_cardinality(M).str());
    r.info("ring maps flat", M.rep.flat_flag() ? "yes" : "no");
    r.check("quasi-coherent", qc.ok, qc.witness);
    r.check("flat", flat);
    bool finite = true;
    for (auto& ring : M.rep.rings) finite = finite && ring.is_finite();
    if (!finite) {
      r.info("kaplansky witness", "skipped: a vertex ring is infinite");
    } else if (qc.ok && flat) {
      std::vector<Matrix> X;
      for (auto& m : M.at) X.push_back(Matrix(m.ring(), m.gens(), 0));
      QuiverWitness w = quiver_kaplansky_witness(M, X, cfg);
      r.pass("kaplansky witness validates");
      r.info("witness size", rep_cardinality(w.sub).str());
    }
  } else {
    throw PreconditionFailed("unknown command " + cmd);
  }
  r.canonicalize();
  return r.violations() ? 1 : 0;
}

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"resolve",        "ext",          "tor",          "tensor",       "factor",
                                             "lift",           "replace",      "derived-tensor", "model-check", "monoidal-check",
                                             "compat-check",   "kaplansky-filtrate", "envelope", "quiver-check"};
  return s;
}

inline std::string summary(const std::string& cmd) {
  static const std::map<std::string, std::string> s = {
      {"resolve", "free resolution of a module"},
      {"ext", "Ext^n(A, B) for a range of n"},
      {"tor", "Tor_n(A, B) for a range of n"},
      {"tensor", "tensor product of two modules"},
      {"factor", "factor a chain map as cof + trivial fib or trivial cof + fib"},
      {"lift", "solve a lifting problem"},
      {"replace", "cofibrant or fibrant replacement of a complex"},
      {"derived-tensor", "homology of the derived tensor product"},
      {"model-check", "sample the model category axioms"},
      {"monoidal-check", "sample the monoidal model axioms"},
      {"compat-check", "check compatibility of a cotorsion pair"},
      {"kaplansky-filtrate", "Kaplansky witness and filtration for a submodule"},
      {"envelope", "small flat subcomplex containing a given subcomplex"},
      {"quiver-check", "quasi-coherence, flatness and cardinality of a representation module"}};
  auto it = s.find(cmd);
  return it == s.end() ? "" : it->second;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"cotor: cotorsion pairs, model structures and chain complexes over Z, Z/n and F_p"};
  app.require_subcommand(1);
  for (auto& name : subcommands()) {
    auto* sc = app.add_subcommand(name, summary(name));
    sc->add_option("--workspace", o.workspace, "workspace file");
    sc->add_option("--seed", o.seed, "random seed (mt19937_64)");
    sc->add_option("--samples", o.samples, "number of samples");
    sc->add_option("--gamma", o.gamma, "generator bound");
    sc->add_option("--step-budget", o.step_budget, "iteration budget");
    sc->add_option("--window", o.window, "degree window lo..hi for homology tables");
    sc->add_option("--structure", o.structure, "projective, flat or injective");
    sc->add_option("--ring", o.ring, "Z, Zmod<n> or Fp<p>");
    sc->add_option("--out", o.out, "write the machine-readable report here");
    sc->add_option("--emit", o.emit, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    sc->add_option("--a", o.a, "first argument");
    sc->add_option("--b", o.b, "second argument");
    sc->add_option("--module", o.module, "module id");
    sc->add_option("--map", o.map, "map or chain map id");
    sc->add_option("--complex", o.complex, "complex id");
    sc->add_option("--problem", o.problem, "lift problem id");
    sc->add_option("--repmodule", o.repmodule, "quiver module id");
    sc->add_option("--max-degree", o.max_degree, "top degree for ext, tor and resolve");
    sc->add_option("--mode", o.mode, "cof, fib or both");
    sc->add_option("--kind", o.kind, "cofibrant or fibrant");
    sc->add_option("--pair", o.pair, "projective, flat, injective or wrong");
    sc->add_option("--class", o.cls, "projective, flat, injective or all");
    sc->add_flag("--sabotage", o.sabotage, "use the sabotaged structure");
  }
  std::vector<const char*> argv{"cotor"};
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  std::string cmd = app.get_subcommands().front()->get_name();
  Report r;
  for (std::size_t k = 0; k < args.size(); ++k) r.command += (k ? " " : "") + args[k];
  r.seed = o.seed;
  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    code = execute(cmd, o, r);
  } catch (const std::exception& e) {
    err << error_kind(e) << ": " << e.what() << "\n";
    return usage_error(e) || !dynamic_cast<const Error*>(&e) ? 2 : 1;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << (o.emit == "machine" ? r.machine() : r.text());
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      err << "cannot write " << o.out << "\n";
      return 2;
    }
    f << r.machine();
  }
  return code;
}

}  // namespace cotor::cli
