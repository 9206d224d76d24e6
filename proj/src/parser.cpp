#include "dglsc/parser.hpp"

#include <cctype>
#include <cstdlib>

namespace dglsc {

// ------------------------------------------------------------------- lexer

std::vector<Token> lex(const std::string& text, std::size_t lineOffset) {
  std::vector<Token> out;
  std::size_t line = lineOffset;
  std::size_t col = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto bump = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (text[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += k;
  };
  auto push = [&](Tok k, std::size_t width) {
    Token t;
    t.kind = k;
    t.line = line;
    t.col = col;
    out.push_back(std::move(t));
    bump(width);
  };
  auto starts = [&](const char* s) {
    std::size_t len = 0;
    while (s[len]) ++len;
    return text.compare(i, len, s) == 0;
  };

  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < n && text[i] != '\n') bump(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t tline = line, tcol = col;
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      long long num = 0, den = 1;
      try {
        num = std::stoll(text.substr(i, j - i));
      } catch (const std::out_of_range&) {
        throw SyntaxError(tline, tcol, "numeral too large");
      }
      if (j < n && text[j] == '/' && j + 1 < n &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        std::size_t k = j + 1;
        while (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
        try {
          den = std::stoll(text.substr(j + 1, k - j - 1));
        } catch (const std::out_of_range&) {
          throw SyntaxError(tline, tcol, "numeral too large");
        }
        if (den == 0) throw SyntaxError(tline, tcol, "zero denominator");
        j = k;
      }
      Token t;
      t.kind = Tok::Number;
      t.num = Rat(num, den);
      t.line = tline;
      t.col = tcol;
      out.push_back(std::move(t));
      bump(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t tline = line, tcol = col;
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                       text[j] == '_'))
        ++j;
      Token t;
      t.kind = Tok::Ident;
      t.text = text.substr(i, j - i);
      t.line = tline;
      t.col = tcol;
      out.push_back(std::move(t));
      bump(j - i);
      continue;
    }
    if (c == '"') {
      const std::size_t tline = line, tcol = col;
      std::size_t j = i + 1;
      while (j < n && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= n || text[j] != '"') {
        throw SyntaxError(tline, tcol, "unterminated string literal");
      }
      Token t;
      t.kind = Tok::String;
      t.text = text.substr(i + 1, j - i - 1);
      t.line = tline;
      t.col = tcol;
      out.push_back(std::move(t));
      bump(j + 1 - i);
      continue;
    }
    // Multi-character operators first (longest match wins).
    if (starts("|-")) { push(Tok::Turnstile, 2); continue; }
    if (starts("<->")) { push(Tok::Iff, 3); continue; }
    if (starts("<=")) { push(Tok::Leq, 2); continue; }
    if (starts(">=")) { push(Tok::Geq, 2); continue; }
    if (starts("->")) { push(Tok::Arrow, 2); continue; }
    if (starts("++")) { push(Tok::PlusPlus, 2); continue; }
    if (starts(":=")) { push(Tok::ColonEq, 2); continue; }
    if (starts("^d")) { push(Tok::DualOp, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '[': push(Tok::LBracket, 1); continue;
      case ']': push(Tok::RBracket, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '!': push(Tok::Not, 1); continue;
      case '&': push(Tok::And, 1); continue;
      case '|': push(Tok::Or, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '\'': push(Tok::Prime, 1); continue;
      case '?': push(Tok::Question, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      default:
        throw SyntaxError(line, col,
                          std::string("unexpected character '") + c + "'");
    }
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

namespace {

std::string tokName(Tok k) {
  switch (k) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Leq: return "'<='";
    case Tok::Geq: return "'>='";
    case Tok::Eq: return "'='";
    case Tok::ColonEq: return "':='";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::PlusPlus: return "'++'";
    case Tok::DualOp: return "'^d'";
    case Tok::Prime: return "'''";
    case Tok::Question: return "'?'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
  }
  return "?";
}

std::string describe(const Token& t) {
  if (t.kind == Tok::Ident) return "'" + t.text + "'";
  if (t.kind == Tok::Number) return "number " + showRat(t.num);
  return tokName(t.kind);
}

bool startsTerm(Tok k) {
  return k == Tok::Ident || k == Tok::Number || k == Tok::Minus ||
         k == Tok::LParen;
}

bool startsComparison(Tok k) {
  return k == Tok::Geq || k == Tok::Leq || k == Tok::Gt || k == Tok::Lt ||
         k == Tok::Eq;
}

}  // namespace

// ------------------------------------------------------------------ parser

Parser::Parser(const std::string& text, std::size_t lineOffset)
    : toks_(lex(text, lineOffset)) {}

const Token& Parser::peek(std::size_t ahead) const {
  const std::size_t idx = pos_ + ahead;
  return idx < toks_.size() ? toks_[idx] : toks_.back();
}

Token Parser::next() {
  Token t = peek();
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool Parser::atEnd() const { return peek().kind == Tok::End; }

bool Parser::accept(Tok k) {
  if (peek().kind != k) return false;
  next();
  return true;
}

bool Parser::acceptIdent(const std::string& word) {
  if (peek().kind != Tok::Ident || peek().text != word) return false;
  next();
  return true;
}

Token Parser::expect(Tok k, const std::string& what) {
  if (peek().kind != k) {
    fail("expected " + tokName(k) + " (" + what + "), got " +
         describe(peek()));
  }
  return next();
}

std::string Parser::expectIdent(const std::string& what) {
  if (peek().kind != Tok::Ident) {
    fail("expected identifier (" + what + "), got " + describe(peek()));
  }
  return next().text;
}

void Parser::expectEnd() {
  if (!atEnd()) fail("trailing input starting at " + describe(peek()));
}

void Parser::fail(const std::string& msg) const {
  throw SyntaxError(peek().line, peek().col, msg);
}

// ------------------------------------------------------------------- terms

TermPtr Parser::term() {
  TermPtr t = termMul();
  for (;;) {
    if (accept(Tok::Plus)) {
      t = tAdd(std::move(t), termMul());
    } else if (peek().kind == Tok::Minus && startsTerm(peek(1).kind)) {
      next();
      t = tSub(std::move(t), termMul());
    } else {
      return t;
    }
  }
}

TermPtr Parser::termMul() {
  TermPtr t = termUnary();
  // `*` doubles as the repetition postfix in games, so only treat it as
  // multiplication when a term can actually follow.
  while (peek().kind == Tok::Star && startsTerm(peek(1).kind)) {
    next();
    t = tMul(std::move(t), termUnary());
  }
  return t;
}

TermPtr Parser::termUnary() {
  if (peek().kind == Tok::Minus) {
    next();
    // A minus immediately before a numeral is a negative literal.
    if (peek().kind == Tok::Number) return tConst(-next().num);
    return tNeg(termUnary());
  }
  return termAtom();
}

TermPtr Parser::termAtom() {
  const Token& t = peek();
  switch (t.kind) {
    case Tok::Number:
      return tConst(next().num);
    case Tok::Ident: {
      if (t.text == "true" || t.text == "false" || t.text == "forall" ||
          t.text == "exists") {
        fail("'" + t.text + "' is not a term");
      }
      return tVar(next().text);
    }
    case Tok::LParen: {
      next();
      TermPtr inner = term();
      expect(Tok::RParen, "closing parenthesis of term");
      return inner;
    }
    default:
      fail("expected a term, got " + describe(t));
  }
}

// ------------------------------------------------------------------- games

GamePtr Parser::game() {
  GamePtr g = gameSeq();
  if (accept(Tok::PlusPlus)) return gChoice(std::move(g), game());
  return g;
}

GamePtr Parser::gameSeq() {
  GamePtr g = gamePostfix();
  if (accept(Tok::Semi)) return gSeq(std::move(g), gameSeq());
  return g;
}

GamePtr Parser::gamePostfix() {
  GamePtr g = gameAtom();
  for (;;) {
    if (accept(Tok::Star)) {
      g = gRepeat(std::move(g));
    } else if (accept(Tok::DualOp)) {
      g = gDual(std::move(g));
    } else {
      return g;
    }
  }
}

GamePtr Parser::gameAtom() {
  const Token& t = peek();
  switch (t.kind) {
    case Tok::Ident: {
      std::string var = next().text;
      expect(Tok::ColonEq, "':=' after assignment target");
      return gAssign(std::move(var), term());
    }
    case Tok::LBrace: {
      next();
      std::string var = expectIdent("evolved variable");
      expect(Tok::Prime, "prime after evolved variable");
      expect(Tok::Eq, "'=' after primed variable");
      TermPtr deriv = term();
      FormulaPtr constraint;
      const Token constraintTok = peek();
      if (accept(Tok::And)) constraint = formula();
      expect(Tok::RBrace, "closing '}' of differential equation");
      if (constraint) {
        if (hasModality(constraint) || hasQuantifier(constraint)) {
          throw SyntaxError(
              constraintTok.line, constraintTok.col,
              "evolution constraint must be quantifier- and modality-free");
        }
      }
      return gContinuous(std::move(var), std::move(deriv),
                         std::move(constraint));
    }
    case Tok::Question: {
      next();
      return gTest(formula());
    }
    case Tok::LParen: {
      next();
      GamePtr inner = game();
      expect(Tok::RParen, "closing parenthesis of game");
      return inner;
    }
    default:
      fail("expected a game, got " + describe(t));
  }
}

// ---------------------------------------------------------------- formulas

FormulaPtr Parser::formula() {
  FormulaPtr l = formulaImply();
  if (accept(Tok::Iff)) return fEquiv(std::move(l), formula());
  return l;
}

FormulaPtr Parser::formulaImply() {
  FormulaPtr l = formulaOr();
  if (accept(Tok::Arrow)) return fImplies(std::move(l), formulaImply());
  return l;
}

FormulaPtr Parser::formulaOr() {
  FormulaPtr l = formulaAnd();
  if (accept(Tok::Or)) return fOr(std::move(l), formulaOr());
  return l;
}

FormulaPtr Parser::formulaAnd() {
  FormulaPtr l = formulaUnary();
  if (accept(Tok::And)) return fAnd(std::move(l), formulaAnd());
  return l;
}

FormulaPtr Parser::formulaUnary() {
  if (accept(Tok::Not)) return fNot(formulaUnary());
  if (peek().kind == Tok::Ident && peek().text == "forall") {
    next();
    std::string var = expectIdent("quantified variable");
    return fForall(std::move(var), formulaUnary());
  }
  if (peek().kind == Tok::Ident && peek().text == "exists") {
    next();
    std::string var = expectIdent("quantified variable");
    return fExists(std::move(var), formulaUnary());
  }
  return formulaAtom();
}

FormulaPtr Parser::formulaAtom() {
  const Token& t = peek();
  if (t.kind == Tok::Ident && t.text == "true") {
    next();
    return fTrue();
  }
  if (t.kind == Tok::Ident && t.text == "false") {
    next();
    return fFalse();
  }
  if (t.kind == Tok::Lt) {
    next();
    GamePtr g = game();
    expect(Tok::Gt, "closing '>' of angel modality");
    return modalTail(true, std::move(g));
  }
  if (t.kind == Tok::LBracket) {
    next();
    GamePtr g = game();
    expect(Tok::RBracket, "closing ']' of demon modality");
    return modalTail(false, std::move(g));
  }
  if (t.kind == Tok::LParen) {
    // Could be a parenthesised formula or a parenthesised term opening a
    // comparison; try the formula reading first and fall back.
    const std::size_t save = position();
    try {
      next();
      FormulaPtr f = formula();
      expect(Tok::RParen, "closing parenthesis");
      if (!startsComparison(peek().kind)) return f;
    } catch (const SyntaxError&) {
    }
    rewind(save);
    return comparison();
  }
  return comparison();
}

FormulaPtr Parser::comparison() {
  TermPtr l = term();
  switch (peek().kind) {
    case Tok::Geq:
      next();
      return fGeq(std::move(l), term());
    case Tok::Leq:
      next();
      return fLeq(std::move(l), term());
    case Tok::Gt:
      next();
      return fGt(std::move(l), term());
    case Tok::Lt:
      next();
      return fLt(std::move(l), term());
    case Tok::Eq:
      next();
      return fEq(std::move(l), term());
    default:
      fail("expected comparison operator after term, got " + describe(peek()));
  }
}

FormulaPtr Parser::modalTail(bool angel, GamePtr g) {
  if (peek().kind == Tok::LParen) {
    const std::size_t save = position();
    try {
      next();
      FormulaPtr p = formula();
      if (accept(Tok::Comma)) {
        FormulaPtr q = formula();
        expect(Tok::RParen, "closing parenthesis of goal pair");
        return angel ? fAngel(std::move(g), std::move(p), std::move(q))
                     : fDemon(std::move(g), std::move(p), std::move(q));
      }
      expect(Tok::RParen, "closing parenthesis of goal");
      if (!startsComparison(peek().kind)) {
        return angel ? fAngel1(std::move(g), std::move(p))
                     : fDemon1(std::move(g), std::move(p));
      }
    } catch (const SyntaxError&) {
    }
    rewind(save);
  }
  FormulaPtr body = formulaUnary();
  return angel ? fAngel1(std::move(g), std::move(body))
               : fDemon1(std::move(g), std::move(body));
}

// ---------------------------------------------------------------- sequents

SequentParts Parser::sequent() {
  SequentParts out;
  if (peek().kind != Tok::Turnstile) {
    out.first.push_back(formula());
    while (accept(Tok::Comma)) out.first.push_back(formula());
  }
  expect(Tok::Turnstile, "'|-' between antecedent and succedent");
  if (!atEnd()) {
    out.second.push_back(formula());
    while (accept(Tok::Comma)) out.second.push_back(formula());
  }
  return out;
}

// ------------------------------------------------------- whole-input entry

ParseResult parse(const std::string& text, std::optional<Category> category) {
  if (category) {
    Parser p(text);
    switch (*category) {
      case Category::Term: {
        TermPtr t = p.term();
        p.expectEnd();
        return t;
      }
      case Category::Game: {
        GamePtr g = p.game();
        p.expectEnd();
        return g;
      }
      case Category::Formula: {
        FormulaPtr f = p.formula();
        p.expectEnd();
        return f;
      }
    }
    throw UnboundCategory("unknown category");
  }
  std::string errors;
  try {
    Parser p(text);
    FormulaPtr f = p.formula();
    p.expectEnd();
    return f;
  } catch (const SyntaxError& e) {
    errors += std::string("  as formula: ") + e.what();
  }
  try {
    Parser p(text);
    GamePtr g = p.game();
    p.expectEnd();
    return g;
  } catch (const SyntaxError& e) {
    errors += std::string("\n  as game: ") + e.what();
  }
  try {
    Parser p(text);
    TermPtr t = p.term();
    p.expectEnd();
    return t;
  } catch (const SyntaxError& e) {
    errors += std::string("\n  as term: ") + e.what();
  }
  throw UnboundCategory("text parses in no syntactic category:\n" + errors);
}

TermPtr parseTerm(const std::string& text) {
  Parser p(text);
  TermPtr t = p.term();
  p.expectEnd();
  return t;
}

GamePtr parseGame(const std::string& text) {
  Parser p(text);
  GamePtr g = p.game();
  p.expectEnd();
  return g;
}

FormulaPtr parseFormula(const std::string& text) {
  Parser p(text);
  FormulaPtr f = p.formula();
  p.expectEnd();
  return f;
}

SequentParts parseSequent(const std::string& text) {
  Parser p(text);
  SequentParts s = p.sequent();
  p.expectEnd();
  return s;
}

}  // namespace dglsc
