#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cotor/model.hpp"
#include "cotor/quiver.hpp"

namespace cotor {

using IntRows = std::vector<std::vector<Int>>;

struct RingDecl {
  std::string kind;  // Z, Zmod, Fp
  Int n = 0;
  bool operator==(const RingDecl&) const = default;
};
struct ModuleDecl {
  std::string ring;
  std::size_t gens = 0;
  IntRows rels;
  bool operator==(const ModuleDecl&) const = default;
};
struct MapDecl {
  std::string source, target;
  IntRows rows;
  bool operator==(const MapDecl&) const = default;
};
struct ComplexDecl {
  std::string ring;
  int lo = 0, hi = 0;
  std::vector<std::pair<int, std::string>> objects, diffs;
  bool operator==(const ComplexDecl&) const = default;
};
struct ChainMapDecl {
  std::string source, target;
  std::vector<std::pair<int, std::string>> comps;
  bool operator==(const ChainMapDecl&) const = default;
};
struct QuiverDecl {
  struct Edge {
    std::string name, from, to;
    std::vector<Int> images;
    bool operator==(const Edge&) const = default;
  };
  std::vector<std::pair<std::string, std::string>> vertices;  // name, ring id
  std::vector<Edge> edges;
  bool operator==(const QuiverDecl&) const = default;
};
struct RepModuleDecl {
  std::string quiver;
  std::vector<std::pair<std::string, std::string>> at, edges;
  bool operator==(const RepModuleDecl&) const = default;
};
struct LiftDecl {
  std::string i, p, top, bottom;
  bool operator==(const LiftDecl&) const = default;
};

using DeclBody = std::variant<RingDecl, ModuleDecl, MapDecl, ComplexDecl, ChainMapDecl, QuiverDecl, RepModuleDecl, LiftDecl>;

struct Decl {
  std::string id;
  DeclBody body;
  std::size_t line = 0, col = 0;
  bool operator==(const Decl& o) const { return id == o.id && body == o.body; }
};

inline const char* decl_keyword(const DeclBody& b) {
  static const char* names[] = {"ring", "module", "map", "complex", "chainmap", "quiver", "repmodule", "liftproblem"};
  return names[b.index()];
}

/// Parsed and validated declarations, with the objects they build.
struct Workspace {
  std::vector<Decl> decls;
  std::map<std::string, Ring> rings;
  std::map<std::string, FpModule> modules;
  std::map<std::string, Matrix> map_matrices;  // all maps, possibly between rings
  std::map<std::string, ModuleMap> maps;       // maps within one ring
  std::map<std::string, ChainComplex> complexes;
  std::map<std::string, ChainMap> chainmaps;
  std::map<std::string, QuiverRep> quivers;
  std::map<std::string, QuiverRepModule> repmodules;
  std::map<std::string, LiftProblem> lifts;

  std::size_t size() const { return decls.size(); }
  bool operator==(const Workspace& o) const { return decls == o.decls; }

  template <class T>
  static const T& lookup(const std::map<std::string, T>& m, const std::string& id, const char* what) {
    auto it = m.find(id);
    if (it == m.end()) throw PreconditionFailed(std::string("workspace has no ") + what + " named " + id);
    return it->second;
  }
  const FpModule& module(const std::string& id) const { return lookup(modules, id, "module"); }
  const ModuleMap& map(const std::string& id) const { return lookup(maps, id, "map"); }
  const ChainComplex& complex(const std::string& id) const { return lookup(complexes, id, "complex"); }
  const ChainMap& chainmap(const std::string& id) const { return lookup(chainmaps, id, "chainmap"); }
  const QuiverRepModule& repmodule(const std::string& id) const { return lookup(repmodules, id, "repmodule"); }
  const LiftProblem& lift(const std::string& id) const { return lookup(lifts, id, "liftproblem"); }
};

namespace detail {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  std::size_t line = 1, col = 1;
};

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto adv = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') adv(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Ident;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\'')) adv(1);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      t.kind = Token::Number;
      adv(1);
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) adv(1);
    } else if (text.compare(i, 2, "->") == 0 || text.compare(i, 2, "..") == 0) {
      t.kind = Token::Punct;
      adv(2);
    } else if (std::string("[],:=").find(c) != std::string::npos) {
      t.kind = Token::Punct;
      adv(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = text.substr(start, i - start);
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

inline const std::set<std::string>& decl_keywords() {
  static const std::set<std::string> k = {"ring", "module", "map", "complex", "chainmap", "quiver", "repmodule", "liftproblem"};
  return k;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  std::vector<Decl> parse() {
    std::vector<Decl> out;
    while (peek().kind != Token::End) out.push_back(decl());
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    throw ParseError(what + (t.kind == Token::End ? " at end of input" : ", found '" + t.text + "'"), t.line, t.col);
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at(const std::string& s) const { return peek().kind != Token::End && peek().text == s; }
  void expect(const std::string& s) {
    if (!at(s)) fail("expected '" + s + "'", peek());
    next();
  }
  std::string ident() {
    if (peek().kind != Token::Ident) fail("expected identifier", peek());
    return next().text;
  }
  Int integer() {
    if (peek().kind != Token::Number) fail("expected integer", peek());
    return Int(next().text);
  }
  int small_int() {
    const Token& t = peek();
    Int v = integer();
    if (v > 1000000 || v < -1000000) fail("integer out of range", t);
    return static_cast<int>(v);
  }
  std::vector<Int> int_list() {
    std::vector<Int> out;
    expect("[");
    if (!at("]"))
      for (;;) {
        out.push_back(integer());
        if (at("]")) break;
        expect(",");
      }
    expect("]");
    return out;
  }
  IntRows matrix() {
    IntRows rows;
    expect("[");
    if (!at("]"))
      for (;;) {
        rows.push_back(int_list());
        if (at("]")) break;
        expect(",");
      }
    expect("]");
    bool all_empty = true;
    for (auto& r : rows) all_empty = all_empty && r.empty();
    if (all_empty) rows.clear();
    return rows;
  }
  std::vector<std::pair<int, std::string>> indexed(const std::string& word) {
    std::vector<std::pair<int, std::string>> out;
    while (at(word)) {
      next();
      int n = small_int();
      out.emplace_back(n, ident());
    }
    return out;
  }

  Decl decl() {
    const Token& kw = peek();
    if (kw.kind != Token::Ident || !decl_keywords().count(kw.text)) fail("expected a declaration keyword", kw);
    std::string k = next().text;
    Decl d;
    d.line = kw.line;
    d.col = kw.col;
    d.id = ident();
    if (k == "ring") {
      RingDecl r;
      r.kind = ident();
      if (r.kind == "Zmod" || r.kind == "Fp") r.n = integer();
      else if (r.kind != "Z") fail("expected Z, Zmod or Fp", toks_[pos_ - 1]);
      d.body = r;
    } else if (k == "module") {
      ModuleDecl m;
      expect("over");
      m.ring = ident();
      expect("gens");
      const Token& g = peek();
      Int gi = integer();
      if (gi < 0 || gi > 10000) fail("generator count out of range", g);
      m.gens = static_cast<std::size_t>(gi);
      if (at("rels")) {
        next();
        m.rels = matrix();
      }
      d.body = m;
    } else if (k == "map") {
      MapDecl m;
      expect(":");
      m.source = ident();
      expect("->");
      m.target = ident();
      expect("matrix");
      m.rows = matrix();
      d.body = m;
    } else if (k == "complex") {
      ComplexDecl c;
      expect("over");
      c.ring = ident();
      expect("degrees");
      c.lo = small_int();
      expect("..");
      c.hi = small_int();
      c.objects = indexed("object");
      c.diffs = indexed("diff");
      d.body = c;
    } else if (k == "chainmap") {
      ChainMapDecl c;
      expect(":");
      c.source = ident();
      expect("->");
      c.target = ident();
      c.comps = indexed("comp");
      d.body = c;
    } else if (k == "quiver") {
      QuiverDecl q;
      expect("vertices");
      while (peek().kind == Token::Ident && peek(1).text == ":" && !at("edges")) {
        std::string v = ident();
        expect(":");
        q.vertices.emplace_back(v, ident());
      }
      if (at("edges")) {
        next();
        while (peek().kind == Token::Ident && peek(1).text == ":") {
          QuiverDecl::Edge e;
          e.name = ident();
          expect(":");
          e.from = ident();
          expect("->");
          e.to = ident();
          expect("ringmap");
          e.images = int_list();
          q.edges.push_back(e);
        }
      }
      d.body = q;
    } else if (k == "repmodule") {
      RepModuleDecl r;
      expect("over");
      r.quiver = ident();
      while (at("at")) {
        next();
        std::string v = ident();
        r.at.emplace_back(v, ident());
      }
      while (at("edge")) {
        next();
        std::string e = ident();
        r.edges.emplace_back(e, ident());
      }
      d.body = r;
    } else {
      LiftDecl l;
      expect("i");
      l.i = ident();
      expect("p");
      l.p = ident();
      expect("top");
      l.top = ident();
      expect("bottom");
      l.bottom = ident();
      d.body = l;
    }
    return d;
  }
};

inline Matrix matrix_from_rows(const Ring& r, const IntRows& rows, std::size_t nrows, std::size_t ncols, const std::string& what) {
  if (rows.empty()) {
    if (nrows && ncols) throw ValidationError(what + ": empty matrix for a " + std::to_string(nrows) + "x" + std::to_string(ncols) + " shape");
    return Matrix(r, nrows, ncols);
  }
  if (rows.size() != nrows) throw ValidationError(what + ": expected " + std::to_string(nrows) + " rows, got " + std::to_string(rows.size()));
  for (auto& row : rows)
    if (row.size() != ncols) throw ValidationError(what + ": every row needs " + std::to_string(ncols) + " entries");
  return Matrix::from_rows(r, rows);
}

inline IntRows rows_of(const Matrix& m) {
  IntRows out;
  if (m.cols() == 0) return out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Int> row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

class Builder {
 public:
  explicit Builder(Workspace& ws) : ws_(ws) {}

  void add(const Decl& d) {
    if (kinds_.count(d.id)) throw ParseError("duplicate identifier " + d.id, d.line, d.col);
    cur_ = &d;
    std::visit([&](const auto& b) { build(d.id, b); }, d.body);
    kinds_[d.id] = d.body.index();
    ws_.decls.push_back(d);
  }

 private:
  Workspace& ws_;
  std::map<std::string, std::size_t> kinds_;
  std::map<std::string, ComplexDecl> complex_decls_;
  const Decl* cur_ = nullptr;

  template <class T>
  const T& ref(const std::map<std::string, T>& m, const std::string& id, const char* what) {
    auto it = m.find(id);
    if (it == m.end()) {
      bool exists = kinds_.count(id);
      throw ParseError(std::string(exists ? "identifier " + id + " is not a " + what : "unknown " + std::string(what) + " " + id),
                       cur_->line, cur_->col);
    }
    return it->second;
  }
  [[noreturn]] void invalid(const std::string& id, const std::string& what) const {
    throw ValidationError(std::string(decl_keyword(cur_->body)) + " " + id + ": " + what);
  }

  void build(const std::string& id, const RingDecl& r) {
    try {
      if (r.kind == "Z") ws_.rings.insert_or_assign(id, Ring::integers());
      else if (r.kind == "Zmod") ws_.rings.insert_or_assign(id, Ring::integers_mod(r.n));
      else ws_.rings.insert_or_assign(id, Ring::prime_field(r.n));
    } catch (const PreconditionFailed& e) {
      invalid(id, e.what());
    }
  }
  void build(const std::string& id, const ModuleDecl& m) {
    const Ring& r = ref(ws_.rings, m.ring, "ring");
    std::size_t cols = m.rels.empty() ? 0 : m.rels[0].size();
    ws_.modules.insert_or_assign(id, FpModule(r, m.gens, matrix_from_rows(r, m.rels, m.gens, cols, "module " + id)));
  }
  void build(const std::string& id, const MapDecl& m) {
    const FpModule& a = ref(ws_.modules, m.source, "module");
    const FpModule& b = ref(ws_.modules, m.target, "module");
    Matrix A = matrix_from_rows(b.ring(), m.rows, b.gens(), a.gens(), "map " + id);
    ws_.map_matrices.insert_or_assign(id, A);
    if (!(a.ring() == b.ring())) return;  // only usable along a quiver edge
    try {
      ws_.maps.insert_or_assign(id, ModuleMap(a, b, A));
    } catch (const Error& e) {
      invalid(id, e.what());
    }
  }
  void build(const std::string& id, const ComplexDecl& c) {
    const Ring& r = ref(ws_.rings, c.ring, "ring");
    if (c.hi < c.lo) invalid(id, "degrees need lo <= hi");
    std::vector<FpModule> objs(static_cast<std::size_t>(c.hi - c.lo + 1), FpModule::zero(r));
    std::map<int, std::string> obj_ids;
    for (auto& [n, mid] : c.objects) {
      const FpModule& M = ref(ws_.modules, mid, "module");
      if (n < c.lo || n > c.hi) invalid(id, "object in degree " + std::to_string(n) + " outside " + std::to_string(c.lo) + ".." + std::to_string(c.hi));
      if (!(M.ring() == r)) invalid(id, "object " + mid + " is over the wrong ring");
      if (obj_ids.count(n)) invalid(id, "two objects in degree " + std::to_string(n));
      objs[static_cast<std::size_t>(n - c.lo)] = M;
      obj_ids[n] = mid;
    }
    std::vector<Matrix> diffs;
    for (int n = c.lo + 1; n <= c.hi; ++n) diffs.push_back(Matrix(r, objs[n - 1 - c.lo].gens(), objs[n - c.lo].gens()));
    std::set<int> seen;
    for (auto& [n, mid] : c.diffs) {
      ref(ws_.map_matrices, mid, "map");
      const MapDecl& md = std::get<MapDecl>(find_decl(mid).body);
      if (n <= c.lo || n > c.hi) invalid(id, "differential d_" + std::to_string(n) + " outside the degree range");
      if (!seen.insert(n).second) invalid(id, "two differentials in degree " + std::to_string(n));
      if (md.source != obj_ids[n] || md.target != obj_ids[n - 1])
        invalid(id, "d_" + std::to_string(n) + " = " + mid + " must go from the degree " + std::to_string(n) + " object to the degree " +
                        std::to_string(n - 1) + " object");
      diffs[static_cast<std::size_t>(n - c.lo - 1)] = ws_.map_matrices.at(mid);
    }
    try {
      ws_.complexes.insert_or_assign(id, ChainComplex(r, c.lo, objs, diffs));
    } catch (const Error& e) {
      invalid(id, e.what());
    }
    complex_decls_[id] = c;
  }
  void build(const std::string& id, const ChainMapDecl& c) {
    const ChainComplex& X = ref(ws_.complexes, c.source, "complex");
    const ChainComplex& Y = ref(ws_.complexes, c.target, "complex");
    auto obj_id = [&](const std::string& cx, int n) {
      for (auto& [k, m] : complex_decls_[cx].objects)
        if (k == n) return m;
      return std::string();
    };
    std::map<int, Matrix> comps;
    for (auto& [n, mid] : c.comps) {
      ref(ws_.map_matrices, mid, "map");
      const MapDecl& md = std::get<MapDecl>(find_decl(mid).body);
      if (md.source != obj_id(c.source, n) || md.target != obj_id(c.target, n))
        invalid(id, "component " + mid + " in degree " + std::to_string(n) + " does not match the complexes");
      if (comps.count(n)) invalid(id, "two components in degree " + std::to_string(n));
      comps[n] = ws_.map_matrices.at(mid);
    }
    try {
      ws_.chainmaps.insert_or_assign(id, ChainMap(X, Y, comps));
    } catch (const Error& e) {
      invalid(id, e.what());
    }
  }
  void build(const std::string& id, const QuiverDecl& q) {
    QuiverRep rep;
    for (auto& [v, rid] : q.vertices) {
      for (auto& w : rep.vertices)
        if (w == v) invalid(id, "vertex " + v + " declared twice");
      rep.vertices.push_back(v);
      rep.rings.push_back(ref(ws_.rings, rid, "ring"));
    }
    for (auto& e : q.edges) {
      QuiverEdge qe;
      qe.name = e.name;
      try {
        qe.from = rep.vertex(e.from);
        qe.to = rep.vertex(e.to);
      } catch (const ValidationError& err) {
        invalid(id, err.what());
      }
      if (e.images.size() != 1) invalid(id, "edge " + e.name + ": ringmap gives the image of 1 only");
      qe.hom = RingHom{rep.rings[qe.from], rep.rings[qe.to], e.images[0]};
      rep.edges.push_back(qe);
    }
    try {
      rep.validate();
    } catch (const ValidationError& err) {
      invalid(id, err.what());
    }
    ws_.quivers.insert_or_assign(id, rep);
  }
  void build(const std::string& id, const RepModuleDecl& r) {
    const QuiverRep& q = ref(ws_.quivers, r.quiver, "quiver");
    QuiverRepModule M{q, std::vector<FpModule>(q.vertices.size()), std::vector<Matrix>(q.edges.size())};
    std::vector<std::string> mod_ids(q.vertices.size());
    std::vector<bool> have_v(q.vertices.size(), false), have_e(q.edges.size(), false);
    for (auto& [v, mid] : r.at) {
      std::size_t k = 0;
      try {
        k = q.vertex(v);
      } catch (const ValidationError& e) {
        invalid(id, e.what());
      }
      if (have_v[k]) invalid(id, "vertex " + v + " given twice");
      M.at[k] = ref(ws_.modules, mid, "module");
      mod_ids[k] = mid;
      have_v[k] = true;
    }
    for (std::size_t k = 0; k < have_v.size(); ++k)
      if (!have_v[k]) invalid(id, "no module at vertex " + q.vertices[k]);
    for (auto& [e, mid] : r.edges) {
      std::size_t k = q.edges.size();
      for (std::size_t j = 0; j < q.edges.size(); ++j)
        if (q.edges[j].name == e) k = j;
      if (k == q.edges.size()) invalid(id, "unknown edge " + e);
      if (have_e[k]) invalid(id, "edge " + e + " given twice");
      ref(ws_.map_matrices, mid, "map");
      const MapDecl& md = std::get<MapDecl>(find_decl(mid).body);
      if (md.source != mod_ids[q.edges[k].from] || md.target != mod_ids[q.edges[k].to])
        invalid(id, "edge " + e + ": map " + mid + " does not go between the vertex modules");
      M.edge_maps[k] = ws_.map_matrices.at(mid);
      have_e[k] = true;
    }
    for (std::size_t k = 0; k < have_e.size(); ++k)
      if (!have_e[k]) invalid(id, "no map on edge " + q.edges[k].name);
    try {
      M.validate();
    } catch (const ValidationError& e) {
      invalid(id, e.what());
    }
    ws_.repmodules.insert_or_assign(id, M);
  }
  void build(const std::string& id, const LiftDecl& l) {
    LiftProblem p{ref(ws_.chainmaps, l.i, "chainmap"), ref(ws_.chainmaps, l.p, "chainmap"), ref(ws_.chainmaps, l.top, "chainmap"),
                  ref(ws_.chainmaps, l.bottom, "chainmap")};
    try {
      p.validate();
    } catch (const PreconditionFailed& e) {
      invalid(id, e.what());
    }
    ws_.lifts.emplace(id, p);
  }

  const Decl& find_decl(const std::string& id) const {
    for (auto& d : ws_.decls)
      if (d.id == id) return d;
    throw InternalError("declaration " + id + " missing");
  }
};

inline std::string int_list_str(const std::vector<Int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
  return out + "]";
}

inline std::string rows_str(const IntRows& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) out += (i ? "," : "") + int_list_str(rows[i]);
  return out + "]";
}

}  // namespace detail

inline Workspace parse_workspace(const std::string& text) {
  Workspace ws;
  detail::Builder b(ws);
  for (auto& d : detail::Parser(text).parse()) b.add(d);
  return ws;
}

inline std::string serialize(const Decl& d) {
  std::ostringstream o;
  o << decl_keyword(d.body) << ' ' << d.id;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, RingDecl>) {
          o << ' ' << b.kind;
          if (b.kind != "Z") o << ' ' << b.n;
        } else if constexpr (std::is_same_v<T, ModuleDecl>) {
          o << " over " << b.ring << " gens " << b.gens << " rels " << detail::rows_str(b.rels);
        } else if constexpr (std::is_same_v<T, MapDecl>) {
          o << " : " << b.source << " -> " << b.target << " matrix " << detail::rows_str(b.rows);
        } else if constexpr (std::is_same_v<T, ComplexDecl>) {
          o << " over " << b.ring << " degrees " << b.lo << ".." << b.hi;
          for (auto& [n, m] : b.objects) o << " object " << n << ' ' << m;
          for (auto& [n, m] : b.diffs) o << " diff " << n << ' ' << m;
        } else if constexpr (std::is_same_v<T, ChainMapDecl>) {
          o << " : " << b.source << " -> " << b.target;
          for (auto& [n, m] : b.comps) o << " comp " << n << ' ' << m;
        } else if constexpr (std::is_same_v<T, QuiverDecl>) {
          o << " vertices";
          for (auto& [v, r] : b.vertices) o << ' ' << v << ':' << r;
          if (!b.edges.empty()) o << " edges";
          for (auto& e : b.edges) o << ' ' << e.name << ": " << e.from << " -> " << e.to << " ringmap " << detail::int_list_str(e.images);
        } else if constexpr (std::is_same_v<T, RepModuleDecl>) {
          o << " over " << b.quiver;
          for (auto& [v, m] : b.at) o << " at " << v << ' ' << m;
          for (auto& [e, m] : b.edges) o << " edge " << e << ' ' << m;
        } else {
          o << " i " << b.i << " p " << b.p << " top " << b.top << " bottom " << b.bottom;
        }
      },
      d.body);
  return o.str();
}

inline std::string serialize(const Workspace& ws) {
  std::string out;
  for (auto& d : ws.decls) out += serialize(d) + "\n";
  return out;
}

}  // namespace cotor
