#include "lak/syntax.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lak/encodings.hpp"
#include "lak/errors.hpp"

namespace lak {

namespace {

enum class Tok {
  Lambda, Dot, LParen, RParen, Bang, Para, Star_, Let, Be, In,
  Ident, KLit, StarConst, Dup, Op, Rho, End
};

struct Token {
  Tok kind;
  std::string text;
  int index = 0;
  size_t pos = 0;
};

struct Lexer {
  std::string_view src;
  size_t i = 0;
  std::vector<Token> tokens;

  void run() {
    while (i < src.size()) {
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
      if (c == ';') {  // comment to end of line
        while (i < src.size() && src[i] != '\n') ++i;
        continue;
      }
      size_t at = i;
      switch (c) {
        case '\\': tokens.push_back({Tok::Lambda, "\\", 0, at}); ++i; continue;
        case '.': tokens.push_back({Tok::Dot, ".", 0, at}); ++i; continue;
        case '(': tokens.push_back({Tok::LParen, "(", 0, at}); ++i; continue;
        case ')': tokens.push_back({Tok::RParen, ")", 0, at}); ++i; continue;
        case '!': tokens.push_back({Tok::Bang, "!", 0, at}); ++i; continue;
        case '$': tokens.push_back({Tok::Para, "$", 0, at}); ++i; continue;
        case '*': tokens.push_back({Tok::Star_, "*", 0, at}); ++i; continue;
        case '#': { lex_klit(at); continue; }
        default: break;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t start = i;
        while (i < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[i])) ||
                src[i] == '_' || src[i] == '\''))
          ++i;
        std::string word(src.substr(start, i - start));
        if (word == "let") tokens.push_back({Tok::Let, word, 0, at});
        else if (word == "be") tokens.push_back({Tok::Be, word, 0, at});
        else if (word == "in") tokens.push_back({Tok::In, word, 0, at});
        else if (word == "star") tokens.push_back({Tok::StarConst, word, 0, at});
        else if (word == "dup") tokens.push_back({Tok::Dup, word, 0, at});
        else if (auto idx = const_index(word, "op"))
          tokens.push_back({Tok::Op, word, *idx, at});
        else if (auto idx = const_index(word, "rho"))
          tokens.push_back({Tok::Rho, word, *idx, at});
        else tokens.push_back({Tok::Ident, word, 0, at});
        continue;
      }
      throw ParseError("unexpected character '" + std::string(1, c) + "' at " +
                       std::to_string(at));
    }
    tokens.push_back({Tok::End, "", 0, src.size()});
  }

  static std::optional<int> const_index(const std::string& word,
                                        std::string_view prefix) {
    if (word.size() <= prefix.size() || word.compare(0, prefix.size(), prefix))
      return std::nullopt;
    int v = 0;
    for (size_t k = prefix.size(); k < word.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(word[k]))) return std::nullopt;
      v = v * 10 + (word[k] - '0');
    }
    return v;
  }

  void lex_klit(size_t at) {
    ++i;  // '#'
    size_t start = i;
    if (i < src.size() && (src[i] == '-' || src[i] == '_')) ++i;
    while (i < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '/'))
      ++i;
    if (i == start) throw ParseError("empty K literal after '#'");
    tokens.push_back({Tok::KLit, std::string(src.substr(start, i - start)), 0, at});
  }
};

struct Parser {
  const std::vector<Token>& toks;
  size_t pos = 0;
  // Lexical scopes map source names to fresh ids; free names get one shared id.
  std::vector<std::pair<std::string, Name>> scope;


  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what + " near '" +
                       peek().text + "' at " + std::to_string(peek().pos));
    ++pos;
  }

  Name lookup(const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    return Names::global(name);
  }

  Term parse() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  bool atom_start(Tok k) const {
    switch (k) {
      case Tok::LParen: case Tok::Ident: case Tok::KLit: case Tok::StarConst:
      case Tok::Dup: case Tok::Op: case Tok::Rho: case Tok::Bang:
      case Tok::Para: case Tok::Lambda:
        return true;
      default:
        return false;
    }
  }

  Term term() {
    if (peek().kind == Tok::Let) return let_term();
    if (peek().kind == Tok::Lambda) return lambda_term();
    Term t = app_term();
    if (peek().kind == Tok::Star_) {
      std::vector<Term> parts{t};
      while (peek().kind == Tok::Star_) {
        take();
        parts.push_back(app_term());
      }
      return mk_tensor(parts);
    }
    return t;
  }

  Term lambda_term() {
    expect(Tok::Lambda, "'\\'");
    Token v = take();
    if (v.kind != Tok::Ident) throw ParseError("expected binder name");
    expect(Tok::Dot, "'.'");
    Name id = Names::fresh(v.text);
    scope.emplace_back(v.text, id);
    Term body = term();
    scope.pop_back();
    return mk_abs(id, body);
  }

  Term let_term() {
    expect(Tok::Let, "'let'");
    Term scrut = term();
    expect(Tok::Be, "'be'");
    if (peek().kind == Tok::Bang || peek().kind == Tok::Para) {
      bool bang = take().kind == Tok::Bang;
      Token v = take();
      if (v.kind != Tok::Ident) throw ParseError("expected let binder name");
      expect(Tok::In, "'in'");
      Name id = Names::fresh(v.text);
      scope.emplace_back(v.text, id);
      Term body = term();
      scope.pop_back();
      return bang ? mk_letbang(scrut, id, body) : mk_letpara(scrut, id, body);
    }
    // tensor pattern: x * y * ...
    std::vector<std::string> names;
    Token first = take();
    if (first.kind != Tok::Ident) throw ParseError("expected tensor pattern");
    names.push_back(first.text);
    while (peek().kind == Tok::Star_) {
      take();
      Token v = take();
      if (v.kind != Tok::Ident) throw ParseError("expected tensor pattern name");
      names.push_back(v.text);
    }
    if (names.size() < 2) throw ParseError("tensor pattern needs >= 2 names");
    expect(Tok::In, "'in'");
    std::vector<Name> ids;
    for (const auto& nm : names) {
      Name id = Names::fresh(nm);
      ids.push_back(id);
      scope.emplace_back(nm, id);
    }
    Term body = term();
    for (size_t k = 0; k < names.size(); ++k) scope.pop_back();
    return mk_let_tensor(scrut, ids, body);
  }

  Term app_term() {
    Term t = prefix_term();
    while (atom_start(peek().kind)) t = mk_app(t, prefix_term());
    return t;
  }

  Term prefix_term() {
    switch (peek().kind) {
      case Tok::Bang: take(); return mk_bang(prefix_term());
      case Tok::Para: take(); return mk_para(prefix_term());
      case Tok::Lambda: return lambda_term();
      default: return atom();
    }
  }

  Term atom() {
    Token t = take();
    switch (t.kind) {
      case Tok::LParen: {
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: return mk_var(lookup(t.text));
      case Tok::KLit: return mk_kval(KElement::parse(t.text));
      case Tok::StarConst: return mk_star();
      case Tok::Dup: return mk_dup();
      case Tok::Op: return mk_op(t.index);
      case Tok::Rho: return mk_rho(t.index);
      default:
        throw ParseError("unexpected '" + t.text + "' at " + std::to_string(t.pos));
    }
  }
};

void collect_names(const Term& t, std::set<Name>& out) {
  if (t->kind == TermKind::Var) out.insert(t->var);
  if (t->kind == TermKind::Abs || t->kind == TermKind::LetBang ||
      t->kind == TermKind::LetPara)
    out.insert(t->var);
  if (t->a) collect_names(t->a, out);
  if (t->b) collect_names(t->b, out);
}

struct Printer {
  std::map<Name, std::string> display;

  Printer(const Term& t, bool qualified) {
    std::set<Name> ids;
    collect_names(t, ids);
    std::map<std::string, int> uses;
    for (Name id : ids) uses[Names::base_of(id)]++;
    for (Name id : ids) {
      std::string base = Names::base_of(id);
      display[id] = (qualified || uses[base] > 1)
                        ? base + "_" + std::to_string(id)
                        : base;
    }
  }

  bool atomic(const Term& t) const {
    return t->kind == TermKind::Var || t->kind == TermKind::Const;
  }

  std::string atom(const Term& t) const {
    if (atomic(t)) return print(t);
    return "(" + print(t) + ")";
  }

  std::string print(const Term& t) const {
    switch (t->kind) {
      case TermKind::Var:
        return display.at(t->var);
      case TermKind::Const:
        switch (t->cnst.kind) {
          case ConstKind::KVal: return "#" + t->cnst.value.to_string();
          case ConstKind::Star: return "star";
          case ConstKind::Dup: return "dup";
          case ConstKind::Op: return "op" + std::to_string(t->cnst.index);
          case ConstKind::Rho: return "rho" + std::to_string(t->cnst.index);
        }
        return "?";
      case TermKind::Abs:
        return "\\" + display.at(t->var) + ". " + print(t->a);
      case TermKind::App:
        return "(" + print(t->a) + ") " + atom(t->b);
      case TermKind::Bang:
        return "!" + atom(t->a);
      case TermKind::Para:
        return "$" + atom(t->a);
      case TermKind::LetBang:
        return "let " + print(t->a) + " be !" + display.at(t->var) + " in " +
               print(t->b);
      case TermKind::LetPara:
        return "let " + print(t->a) + " be $" + display.at(t->var) + " in " +
               print(t->b);
    }
    return "?";
  }
};

}  // namespace

Term parse_term(std::string_view text) {
  Lexer lex{text};
  lex.run();
  Parser p{lex.tokens};
  return p.parse();
}

std::string print_term(const Term& t) {
  Printer pr(t, false);
  return pr.print(t);
}

std::string print_term_qualified(const Term& t) {
  Printer pr(t, true);
  return pr.print(t);
}

}  // namespace lak
