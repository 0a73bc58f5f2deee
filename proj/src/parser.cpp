#include "rdetect/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace rdetect {

ParseError::ParseError(int line, int column, const std::string& message)
    : ProtocolError("line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class TokenKind { word, plus, arrow, invalid };

struct Token {
  TokenKind kind;
  std::string_view text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const int col = static_cast<int>(i) + 1;
    if (c == '+') {
      out.push_back({TokenKind::plus, line.substr(i, 1), col});
      ++i;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({TokenKind::arrow, line.substr(i, 2), col});
      i += 2;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      out.push_back({TokenKind::word, line.substr(i, j - i), col});
      i = j;
    } else {
      out.push_back({TokenKind::invalid, line.substr(i, 1), col});
      ++i;
    }
  }
  return out;
}

class Reader {
 public:
  Protocol read(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = text.find('\n', pos);
      auto line = text.substr(pos, end == std::string_view::npos ? text.size() - pos
                                                                  : end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      read_line(line_no, line);
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    return make_protocol(std::move(species_), reactions_);
  }

 private:
  void read_line(int line_no, std::string_view line) {
    line_ = line_no;
    tokens_ = tokenize(line);
    cursor_ = 0;
    eol_column_ = static_cast<int>(line.size()) + 1;
    if (tokens_.empty()) return;
    for (const auto& t : tokens_)
      if (t.kind == TokenKind::invalid)
        fail(t.column, "unexpected character '" + std::string(t.text) + "'");

    const auto keyword = tokens_.front();
    ++cursor_;
    if (keyword.kind == TokenKind::word && keyword.text == "species") {
      read_species();
    } else if (keyword.kind == TokenKind::word && keyword.text == "reaction") {
      read_reaction();
    } else {
      fail(keyword.column, "expected 'species' or 'reaction'");
    }
    if (cursor_ < tokens_.size())
      fail(tokens_[cursor_].column, "unexpected trailing '" +
                                        std::string(tokens_[cursor_].text) + "'");
  }

  void read_species() {
    const auto name = expect_name();
    if (ids_.count(std::string(name.text)))
      fail(name.column, "duplicate species '" + std::string(name.text) + "'");
    if (cursor_ >= tokens_.size())
      fail(eol_column_, "missing output annotation (detect|nondetect)");
    const auto out = tokens_[cursor_++];
    Output output;
    if (out.kind == TokenKind::word && out.text == "detect") {
      output = Output::detect;
    } else if (out.kind == TokenKind::word && out.text == "nondetect") {
      output = Output::nondetect;
    } else {
      fail(out.column, "expected 'detect' or 'nondetect'");
    }
    ids_.emplace(std::string(name.text), static_cast<SpeciesId>(species_.size()));
    species_.push_back({std::string(name.text), output, std::nullopt});
  }

  void read_reaction() {
    const int column = cursor_ < tokens_.size() ? tokens_[cursor_].column : eol_column_;
    const auto a = expect_species();
    expect(TokenKind::plus, "'+'");
    const auto b = expect_species();
    expect(TokenKind::arrow, "'->'");
    const auto c = expect_species();
    expect(TokenKind::plus, "'+'");
    const auto d = expect_species();

    auto check = [this, column](SpeciesPair key, SpeciesPair value) {
      auto [it, fresh] = entries_.emplace(key, value);
      if (!fresh && it->second != value)
        fail(column, "reaction conflicts with an earlier rule for " +
                    species_[key[0]].name + " + " + species_[key[1]].name);
    };
    check({a, b}, {c, d});
    if (a != b) check({b, a}, {d, c});
    reactions_.push_back({{a, b}, {c, d}});
  }

  Token expect_name() {
    if (cursor_ >= tokens_.size()) fail(eol_column_, "expected species name");
    const auto t = tokens_[cursor_];
    if (t.kind != TokenKind::word)
      fail(t.column, "expected species name, found '" + std::string(t.text) + "'");
    if (!is_valid_species_name(t.text))
      fail(t.column, "invalid species name '" + std::string(t.text) + "'");
    ++cursor_;
    return t;
  }

  SpeciesId expect_species() {
    const auto t = expect_name();
    auto it = ids_.find(std::string(t.text));
    if (it == ids_.end())
      fail(t.column, "undeclared species '" + std::string(t.text) + "'");
    return it->second;
  }

  void expect(TokenKind kind, const char* what) {
    if (cursor_ >= tokens_.size())
      fail(eol_column_, std::string("expected ") + what);
    const auto t = tokens_[cursor_];
    if (t.kind != kind)
      fail(t.column, std::string("expected ") + what + ", found '" +
                         std::string(t.text) + "'");
    ++cursor_;
  }

  [[noreturn]] void fail(int column, const std::string& msg) const {
    throw ParseError(line_, column, msg);
  }

  std::vector<SpeciesDecl> species_;
  std::vector<Reaction> reactions_;
  std::unordered_map<std::string, SpeciesId> ids_;
  std::map<SpeciesPair, SpeciesPair> entries_;

  int line_ = 0;
  int eol_column_ = 1;
  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

}  // namespace

Protocol parse_protocol(std::string_view text) { return Reader{}.read(text); }

std::string serialize_protocol(const Protocol& p) {
  std::ostringstream os;
  for (const auto& s : p.species())
    os << "species " << s.name << ' ' << to_string(s.output) << '\n';
  for (const auto& r : p.canonical_rules()) {
    os << "reaction " << p.species(r.reactants[0]).name << " + "
       << p.species(r.reactants[1]).name << " -> "
       << p.species(r.products[0]).name << " + "
       << p.species(r.products[1]).name << '\n';
  }
  return os.str();
}

}  // namespace rdetect
