#pragma once

// Plain-text mask grammar.
//
//   # comment
//   axes 2
//   period 0.142857142857
//   term sin 1.3 1 x          amplitude * sin(h dk x)
//   term cos 1.5 2 y          amplitude * cos(h dk y)
//   term sin*cos 2.8 1 xy     amplitude * sin(h dk x) * cos(h dk y)
//   term linear 1 1 x         amplitude * h * dk * x  (integer coefficient)

#include <iosfwd>
#include <string>
#include <string_view>

#include "nlt/unitary.hpp"

namespace nlt {

/// Parses the fields after the `term` keyword. Throws ParseError.
MaskTerm parse_mask_term(std::string_view fields, const std::string& source, int line);
std::string format_mask_term(const MaskTerm& term);

MaskDefinition parse_mask(std::istream& in, const std::string& source);
MaskDefinition load_mask(const std::string& path);
std::string format_mask(const MaskDefinition& def);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace nlt
