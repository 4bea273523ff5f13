#pragma once

// Line-oriented circuit description format:
//
//   system bosons=<int> [fermions=<int>] cutoff=<int>
//   input create <mode>+
//   input superpose <complex>:<mode-list> (; <complex>:<mode-list>)*
//   bs <m1> <m2> (sym|asym|angle=<radians>)
//   phase <mode> <radians>
//   kerr <m1> <m2> [strength=<radians>]        (default pi)
//   vertex <photon-mode> <e-mode> <p-mode> theta=<radians>
//   measure all | measure <mode>+
//
// Modes are 1-based with bosonic modes numbered before fermionic ones; `b<k>`
// and `f<k>` name the k-th boson or fermion mode instead.
// '#' starts a comment. A <mode-list> is comma-separated and may repeat a
// bosonic mode; an empty list is the vacuum. Complex literals are `re`,
// `imi`, or `re+imi`. Angles are decimal numbers or multiples of pi such as
// `pi`, `-pi/4`, `3*pi/2`. The input is normalized on parse; `measure`
// defaults to all modes.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fockbench/circuit.hpp"

namespace fockbench {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

Circuit parse_circuit(std::string_view text);

/// Text that parse_circuit maps back to an equivalent circuit. Throws
/// std::invalid_argument for elements the format cannot express.
std::string render(const Circuit& circuit);

/// Angle literal: decimal number or rational multiple of pi.
double parse_angle(std::string_view text);

}  // namespace fockbench
