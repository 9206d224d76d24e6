// Lexer and recursive-descent parser for terms, games, formulas and
// sequents.
//
// Surface syntax accepted on top of the core grammar (all desugared during
// parsing, see ast.hpp):
//
//   P | Q      P -> Q      P <-> Q
//   e = e      e <= e      e < e      e > e
//   <g>P  (single goal)    [g]Q  (single goal)
//
// Token-level access is public so the line-oriented model and proof-script
// readers can reuse the same lexer and embed full formula/game/term parses
// mid-line.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dglsc/ast.hpp"
#include "dglsc/errors.hpp"

namespace dglsc {

enum class Tok {
  End,
  Ident,    // identifiers and keywords (true, false, forall, exists, ...)
  Number,   // nonnegative integer or fraction p/q
  String,   // "double-quoted", used by model/proof files
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Lt,
  Gt,
  Leq,
  Geq,
  Eq,
  ColonEq,
  Colon,
  Arrow,      // ->
  Iff,        // <->
  Not,        // !
  And,        // &
  Or,         // |
  Turnstile,  // |-
  Plus,
  Minus,
  Star,
  PlusPlus,  // ++
  DualOp,    // ^d
  Prime,     // '
  Question,
  Semi,
  Comma,
  Dot,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // Ident / String content
  Rat num;           // Number value
  std::size_t line = 0;
  std::size_t col = 0;
};

// Tokenises `text`; `#` starts a comment running to end of line. Reported
// line numbers start at `lineOffset` (callers reading files line by line
// pass the real line number).
std::vector<Token> lex(const std::string& text, std::size_t lineOffset = 1);

// A sequent "A1, ..., An |- S1, ..., Sm"; either side may be empty.
using SequentParts =
    std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>>;

class Parser {
 public:
  explicit Parser(const std::string& text, std::size_t lineOffset = 1);

  // Prefix parsers: consume from the current position and stop at the first
  // token that cannot extend the construct.
  TermPtr term();
  GamePtr game();
  FormulaPtr formula();
  SequentParts sequent();

  // Token-level access for embedding front ends.
  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool atEnd() const;
  bool accept(Tok k);
  bool acceptIdent(const std::string& word);
  Token expect(Tok k, const std::string& what);
  std::string expectIdent(const std::string& what);
  void expectEnd();
  [[noreturn]] void fail(const std::string& msg) const;
  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

 private:
  FormulaPtr formulaImply();
  FormulaPtr formulaOr();
  FormulaPtr formulaAnd();
  FormulaPtr formulaUnary();
  FormulaPtr formulaAtom();
  FormulaPtr comparison();
  FormulaPtr modalTail(bool angel, GamePtr g);
  GamePtr gameSeq();
  GamePtr gamePostfix();
  GamePtr gameAtom();
  TermPtr termMul();
  TermPtr termUnary();
  TermPtr termAtom();

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------- whole-input entry

enum class Category { Term, Game, Formula };

using ParseResult = std::variant<TermPtr, GamePtr, FormulaPtr>;

// Parses the complete text as the requested category (SyntaxError on
// failure). Without a category, tries formula, then game, then term and
// throws UnboundCategory if none fits.
ParseResult parse(const std::string& text,
                  std::optional<Category> category = std::nullopt);

TermPtr parseTerm(const std::string& text);
GamePtr parseGame(const std::string& text);
FormulaPtr parseFormula(const std::string& text);
SequentParts parseSequent(const std::string& text);

}  // namespace dglsc
