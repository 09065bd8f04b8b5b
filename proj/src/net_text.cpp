#include "mmnet/net_text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mmnet/error.hpp"
#include "mmnet/lexer.hpp"

namespace mmnet {

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw FileError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& file, std::string_view content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw FileError("cannot write " + file.string());
  out << content;
  if (!out) throw FileError("write failed for " + file.string());
}

namespace {

class NetParser {
 public:
  NetParser(std::string_view text, std::filesystem::path base)
      : ts_(tokenize(text)), base_(std::move(base)) {}

  MMNet run() {
    ts_.expect_keyword("net");
    net_.name = name();
    while (!ts_.at_end()) {
      if (ts_.accept_keyword("prefix")) {
        std::string p = ts_.expect_ident();
        ts_.expect_punct(":");
        const Token& iri = ts_.peek();
        if (iri.kind != TokenKind::Iri) ts_.fail("expected <namespace>");
        net_.prefixes.declare(p, ts_.next().text);
      } else if (ts_.accept_keyword("types")) {
        types();
      } else if (ts_.accept_keyword("actions")) {
        block([&] { action(); });
      } else if (ts_.accept_keyword("places")) {
        block([&] { place(); });
      } else if (ts_.accept_keyword("transitions")) {
        block([&] { transition(); });
      } else if (ts_.accept_keyword("init")) {
        block([&] { init_item(); });
      } else {
        ts_.fail("expected prefix, types, actions, places, transitions or init");
      }
    }
    return std::move(net_);
  }

 private:
  template <typename F>
  void block(F item) {
    ts_.expect_punct("{");
    while (!ts_.accept_punct("}")) {
      if (ts_.at_end()) ts_.fail("unclosed block");
      item();
    }
  }

  std::string name() {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::Ident || t.kind == TokenKind::String) return ts_.next().text;
    ts_.fail("expected a name");
  }

  std::string string_literal() {
    if (ts_.peek().kind != TokenKind::String) ts_.fail("expected a string");
    return ts_.next().text;
  }

  void types() {
    block([&] {
      ts_.expect_keyword("media");
      do {
        net_.media_types.insert(ts_.expect_ident());
      } while (ts_.accept_punct(","));
    });
  }

  std::vector<Param> params(const std::string& close) {
    std::vector<Param> out;
    if (ts_.is_punct(close)) return out;
    do {
      Param p;
      p.name = ts_.expect_ident();
      ts_.expect_punct(":");
      p.type = parse_type(ts_, net_.media_types);
      out.push_back(std::move(p));
    } while (ts_.accept_punct(","));
    return out;
  }

  std::vector<Expr> exprs(const std::string& close) {
    std::vector<Expr> out;
    if (ts_.is_punct(close)) return out;
    do {
      out.push_back(parse_expr(ts_, net_.prefixes));
    } while (ts_.accept_punct(","));
    return out;
  }

  // del-mm and friends lex as ident '-' ident.
  std::string section_name() {
    std::string head = ts_.expect_ident();
    ts_.expect_punct("-");
    return head + "-" + ts_.expect_ident();
  }

  void action() {
    ts_.expect_keyword("action");
    ActionDef def;
    def.name = name();
    ts_.expect_punct("(");
    def.params = params(")");
    ts_.expect_punct(")");
    block([&] {
      const Token at = ts_.peek();
      std::string sec = section_name();
      if (sec == "del-mm" || sec == "add-mm") {
        auto& dst = sec == "del-mm" ? def.mm_minus : def.mm_plus;
        block([&] {
          ts_.expect_punct("(");
          TripleTemplate tt;
          tt.s = parse_expr(ts_, net_.prefixes);
          ts_.expect_punct(",");
          tt.p = parse_expr(ts_, net_.prefixes);
          ts_.expect_punct(",");
          tt.o = parse_expr(ts_, net_.prefixes);
          ts_.expect_punct(")");
          ts_.accept_punct(",");
          dst.push_back(std::move(tt));
        });
      } else if (sec == "del-mo") {
        block([&] {
          def.mo_minus.push_back(parse_expr(ts_, net_.prefixes));
          ts_.accept_punct(",");
        });
      } else if (sec == "add-mo") {
        block([&] {
          Generator g;
          g.target = parse_expr(ts_, net_.prefixes);
          ts_.expect_punct("->");
          g.function = ts_.expect_ident();
          ts_.expect_punct("(");
          g.args = exprs(")");
          ts_.expect_punct(")");
          ts_.accept_punct(",");
          def.mo_plus.push_back(std::move(g));
        });
      } else {
        ts_.fail_at(at, "expected del-mm, add-mm, del-mo or add-mo");
      }
    });
    net_.actions.push_back(std::move(def));
  }

  TypeTuple color() {
    TypeTuple out;
    do {
      out.push_back(parse_type(ts_, net_.media_types));
    } while (ts_.accept_punct("*"));
    return out;
  }

  void place() {
    if (ts_.accept_keyword("place")) {
      std::string n = name();
      ts_.expect_punct(":");
      net_.places.push_back(make_place(n, color()));
    } else if (ts_.accept_keyword("view")) {
      std::string n = name();
      ts_.expect_punct(":");
      TypeTuple c = color();
      ts_.expect_keyword("query");
      const Token at = ts_.peek();
      std::string q = string_literal();
      try {
        net_.places.push_back(make_view(n, c, q, net_.prefixes));
      } catch (const SyntaxError& e) {
        ts_.fail_at(at, "in query of view " + n + ": " + e.what());
      }
    } else {
      ts_.fail("expected place or view");
    }
  }

  Arc arc() {
    Arc a;
    a.place = name();
    ts_.expect_punct("[");
    a.inscription = exprs("]");
    ts_.expect_punct("]");
    return a;
  }

  void transition() {
    ts_.expect_keyword("transition");
    Transition t;
    t.name = name();
    bool has_guard = false;
    block([&] {
      if (ts_.accept_keyword("guard")) {
        if (has_guard) ts_.fail("second guard");
        has_guard = true;
        t.guard = parse_guard(ts_, net_.prefixes);
      } else if (ts_.accept_keyword("fresh")) {
        for (auto& p : params("}")) t.fresh.push_back(std::move(p));
      } else if (ts_.accept_keyword("input")) {
        for (auto& p : params("}")) t.external.push_back(std::move(p));
      } else if (ts_.accept_keyword("action")) {
        if (t.action) ts_.fail("second action");
        ActionCall call;
        call.action = name();
        ts_.expect_punct("(");
        call.args = exprs(")");
        ts_.expect_punct(")");
        t.action = std::move(call);
      } else if (ts_.accept_keyword("in")) {
        t.inputs.push_back(arc());
      } else if (ts_.accept_keyword("read")) {
        t.reads.push_back(arc());
      } else if (ts_.accept_keyword("out")) {
        t.outputs.push_back(arc());
      } else {
        ts_.fail("expected guard, fresh, input, action, in, read or out");
      }
    });
    net_.transitions.push_back(std::move(t));
  }

  void init_item() {
    if (ts_.accept_keyword("token")) {
      const Token at = ts_.peek();
      std::string n = name();
      const Place* p = net_.find_place(n);
      if (!p) ts_.fail_at(at, "token for undeclared place " + n);
      net_.init.tokens.push_back({n, parse_tuple(ts_, p->color, net_.prefixes)});
    } else if (ts_.accept_keyword("triples")) {
      net_.init.triples_file = string_literal();
      add_triples(read_file(base_ / net_.init.triples_file));
    } else if (ts_.accept_keyword("metadata")) {
      add_triples(string_literal());
    } else if (ts_.accept_keyword("objects")) {
      net_.init.objects_file = string_literal();
      add_objects(read_file(base_ / net_.init.objects_file));
    } else if (ts_.accept_keyword("store")) {
      add_objects(string_literal());
    } else {
      ts_.fail("expected token, triples, metadata, objects or store");
    }
  }

  void add_triples(const std::string& text) {
    MetadataGraph g = parse_ntriples(text, net_.prefixes);
    net_.init.storage.metadata = insert(std::move(net_.init.storage.metadata), g.triples());
  }

  void add_objects(const std::string& text) {
    ObjectStore store = store_from_json(text);
    for (const auto& [addr, img] : store.objects())
      net_.init.storage.objects.put_or_update(addr, img);
  }

  TokenStream ts_;
  std::filesystem::path base_;
  MMNet net_;
};

bool plain_name(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '\'') return false;
  for (unsigned char c : s)
    if (!(std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80)) return false;
  return true;
}

std::string write_name(const std::string& s) { return plain_name(s) ? s : quote(s); }

std::string long_string(const std::string& s) {
  if (s.find("\"\"\"") == std::string::npos && (s.empty() || s.back() != '"'))
    return "\"\"\"" + s + "\"\"\"";
  return quote(s);
}

std::string write_params(const std::vector<Param>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].name + ": " + ps[i].type.name();
  }
  return out;
}

std::string write_color(const TypeTuple& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " * ";
    out += c[i].name();
  }
  return out;
}

}  // namespace

MMNet parse_net(std::string_view text, const std::filesystem::path& base_dir) {
  return NetParser(text, base_dir).run();
}

MMNet load_net(const std::filesystem::path& file) {
  return parse_net(read_file(file), file.parent_path());
}

std::string write_net(const MMNet& net) {
  const PrefixMap& px = net.prefixes;
  std::ostringstream out;
  out << "net " << write_name(net.name) << "\n";
  for (const auto& [p, ns] : px.entries())
    if (p != "mmdb" || ns != kMmdbNamespace) out << "prefix " << p << ": <" << ns << ">\n";
  out << "\ntypes {\n";
  for (const auto& m : net.media_types) out << "  media " << m << "\n";
  out << "}\n";

  if (!net.actions.empty()) {
    out << "\nactions {\n";
    for (const auto& a : net.actions) {
      out << "  action " << write_name(a.name) << "(" << write_params(a.params) << ") {\n";
      auto templates = [&](const char* sec, const std::vector<TripleTemplate>& ts) {
        if (ts.empty()) return;
        out << "    " << sec << " {\n";
        for (const auto& t : ts)
          out << "      (" << to_string(t.s, px) << ", " << to_string(t.p, px) << ", "
              << to_string(t.o, px) << ")\n";
        out << "    }\n";
      };
      templates("del-mm", a.mm_minus);
      templates("add-mm", a.mm_plus);
      if (!a.mo_minus.empty()) out << "    del-mo { " << to_string(a.mo_minus, px) << " }\n";
      if (!a.mo_plus.empty()) {
        out << "    add-mo {\n";
        for (const auto& g : a.mo_plus)
          out << "      " << to_string(g.target, px) << " -> " << g.function << "("
              << to_string(g.args, px) << ")\n";
        out << "    }\n";
      }
      out << "  }\n";
    }
    out << "}\n";
  }

  out << "\nplaces {\n";
  for (const auto& p : net.places) {
    if (p.is_view()) {
      std::string q = p.query_text.empty() && p.query ? unparse_query(*p.query, px) : p.query_text;
      out << "  view " << write_name(p.name) << " : " << write_color(p.color) << "\n    query "
          << long_string(q) << "\n";
    } else {
      out << "  place " << write_name(p.name) << " : " << write_color(p.color) << "\n";
    }
  }
  out << "}\n";

  out << "\ntransitions {\n";
  for (const auto& t : net.transitions) {
    out << "  transition " << write_name(t.name) << " {\n";
    if (t.guard.op != Guard::Op::True) out << "    guard " << to_string(t.guard, px) << "\n";
    if (!t.fresh.empty()) out << "    fresh " << write_params(t.fresh) << "\n";
    if (!t.external.empty()) out << "    input " << write_params(t.external) << "\n";
    auto arcs = [&](const char* kw, const std::vector<Arc>& as) {
      for (const auto& a : as)
        out << "    " << kw << " " << write_name(a.place) << " [" << to_string(a.inscription, px)
            << "]\n";
    };
    arcs("in", t.inputs);
    arcs("read", t.reads);
    if (t.action)
      out << "    action " << write_name(t.action->action) << "(" << to_string(t.action->args, px)
          << ")\n";
    arcs("out", t.outputs);
    out << "  }\n";
  }
  out << "}\n";

  const auto& st = net.init.storage;
  if (!net.init.tokens.empty() || !st.metadata.empty() || st.objects.size() ||
      !net.init.triples_file.empty() || !net.init.objects_file.empty()) {
    out << "\ninit {\n";
    for (const auto& tok : net.init.tokens)
      out << "  token " << write_name(tok.place) << " " << tuple_to_string(tok.tuple) << "\n";
    if (!net.init.triples_file.empty())
      out << "  triples " << quote(net.init.triples_file) << "\n";
    else if (!st.metadata.empty())
      out << "  metadata " << long_string("\n" + write_ntriples(st.metadata, px)) << "\n";
    if (!net.init.objects_file.empty())
      out << "  objects " << quote(net.init.objects_file) << "\n";
    else if (st.objects.size())
      out << "  store " << long_string(store_to_json(st.objects)) << "\n";
    out << "}\n";
  }
  return out.str();
}

}  // namespace mmnet
