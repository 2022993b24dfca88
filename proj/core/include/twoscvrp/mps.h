#ifndef TWOSCVRP_MPS_H_
#define TWOSCVRP_MPS_H_

#include <stdexcept>
#include <string>

#include "twoscvrp/milp.h"

namespace twoscvrp {

class MpsError : public std::runtime_error {
 public:
  MpsError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Deterministic MPS text: rows and columns in id order, binaries as BV
// bounds, general integers inside MARKER INTORG/INTEND with explicit bounds.
// Throws ModelError when the model does not validate.
std::string ExportMps(const ModelIR& model);

// Reads the fields written by ExportMps plus the usual bound types
// (LO UP FX FR MI PL BV LI UI). RANGES and objective offsets are rejected.
ModelIR ParseMps(const std::string& text);

// CPLEX LP format with the same ordering rules.
std::string ExportLp(const ModelIR& model);

// Exact decimal when it terminates, else the 17-digit decimal nearest.
std::string FormatNumber(const Rational& value);

}  // namespace twoscvrp

#endif  // TWOSCVRP_MPS_H_
