#pragma once

#include <string>
#include <string_view>

#include "rdetect/protocol.hpp"

namespace rdetect {

/// Rejection from the `.pp` reader, carrying the 1-based location of the
/// first offending token.
class ParseError : public ProtocolError {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Reads the line-oriented protocol format:
///
///   # comment
///   species <name> detect|nondetect
///   reaction <A> + <B> -> <C> + <D>
///
/// Species must be declared before use. Each reaction is entered for both
/// reactant orders.
Protocol parse_protocol(std::string_view text);

/// Canonical text: species by id, then reactions ordered by reactant ids.
/// An empty protocol yields an empty document.
std::string serialize_protocol(const Protocol& p);

}  // namespace rdetect
