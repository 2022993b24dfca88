#include "twoscvrp/mps.h"

#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace twoscvrp {
namespace {

constexpr const char* kObjRow = "OBJ";

void RequireValid(const ModelIR& model) {
  auto defects = model.Validate();
  if (!defects.empty()) throw ModelError("cannot export invalid model: " + defects.front());
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// Column-major view of constraint coefficients: (row, coef) per variable.
std::vector<std::vector<std::pair<int, Rational>>> Columns(const ModelIR& model) {
  std::vector<std::vector<std::pair<int, Rational>>> cols(model.num_vars());
  for (int r = 0; r < model.num_constraints(); ++r) {
    for (const auto& t : model.constraints()[r].terms) cols[t.var].emplace_back(r, t.coef);
  }
  return cols;
}

}  // namespace

std::string FormatNumber(const Rational& value) {
  std::string exact = value.ToDecimal();
  if (exact.find_first_of("eE") == std::string::npos) return exact;
  auto parsed = Rational::Parse(exact);
  return parsed ? parsed->ToDecimal() : exact;
}

std::string ExportMps(const ModelIR& model) {
  RequireValid(model);
  std::ostringstream out;
  out << "NAME          " << model.name() << "\n";
  out << "ROWS\n";
  out << " N  " << kObjRow << "\n";
  for (const auto& c : model.constraints()) {
    const char* type = c.sense == Sense::kLe ? "L" : c.sense == Sense::kGe ? "G" : "E";
    out << " " << type << "  " << c.name << "\n";
  }

  out << "COLUMNS\n";
  auto cols = Columns(model);
  std::vector<Rational> obj(model.num_vars());
  for (const auto& t : model.objective()) obj[t.var] = t.coef;
  bool in_marker = false;
  for (VarId id = 0; id < model.num_vars(); ++id) {
    const auto& v = model.var(id);
    const bool general = v.kind == VarKind::kInteger;
    if (general && !in_marker) {
      out << "    MARKER  'MARKER'  'INTORG'\n";
      in_marker = true;
    } else if (!general && in_marker) {
      out << "    MARKER  'MARKER'  'INTEND'\n";
      in_marker = false;
    }
    bool any = false;
    if (!obj[id].is_zero()) {
      out << "    " << v.name << "  " << kObjRow << "  " << FormatNumber(obj[id]) << "\n";
      any = true;
    }
    for (const auto& [row, coef] : cols[id]) {
      out << "    " << v.name << "  " << model.constraints()[row].name << "  " << FormatNumber(coef)
          << "\n";
      any = true;
    }
    // Columns with no entries still have to be declared.
    if (!any) out << "    " << v.name << "  " << kObjRow << "  0\n";
  }
  if (in_marker) out << "    MARKER  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  for (const auto& c : model.constraints()) {
    if (!c.rhs.is_zero()) out << "    RHS  " << c.name << "  " << FormatNumber(c.rhs) << "\n";
  }

  out << "BOUNDS\n";
  for (VarId id = 0; id < model.num_vars(); ++id) {
    const auto& v = model.var(id);
    if (v.kind == VarKind::kBinary) {
      out << " BV BND  " << v.name << "\n";
      // A fixed binary keeps its kind; the tightened bound follows.
      if (v.lower && !v.lower->is_zero()) out << " LO BND  " << v.name << "  " << FormatNumber(*v.lower) << "\n";
      if (v.upper && *v.upper != Rational(1)) out << " UP BND  " << v.name << "  " << FormatNumber(*v.upper) << "\n";
      continue;
    }
    if (v.kind == VarKind::kInteger) {
      if (v.lower) {
        out << " LO BND  " << v.name << "  " << FormatNumber(*v.lower) << "\n";
      } else {
        out << " MI BND  " << v.name << "\n";
      }
      if (v.upper) {
        out << " UP BND  " << v.name << "  " << FormatNumber(*v.upper) << "\n";
      } else {
        out << " PL BND  " << v.name << "\n";
      }
      continue;
    }
    if (!v.lower && !v.upper) {
      out << " FR BND  " << v.name << "\n";
      continue;
    }
    if (!v.lower) {
      out << " MI BND  " << v.name << "\n";
    } else if (!v.lower->is_zero()) {
      out << " LO BND  " << v.name << "  " << FormatNumber(*v.lower) << "\n";
    }
    if (v.upper) out << " UP BND  " << v.name << "  " << FormatNumber(*v.upper) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

ModelIR ParseMps(const std::string& text) {
  enum class Section { kNone, kName, kRows, kColumns, kRhs, kBounds, kEnd };
  Section section = Section::kNone;
  std::string model_name = "model";
  std::string obj_row;

  struct RowInfo {
    std::string name;
    Sense sense;
    std::vector<Term> terms;
    Rational rhs;
  };
  std::vector<RowInfo> rows;
  std::unordered_map<std::string, int> row_index;

  struct ColInfo {
    std::string name;
    bool integer = false;
    bool binary = false;
    std::optional<Rational> lower = Rational(0);
    std::optional<Rational> upper;
  };
  std::vector<ColInfo> cols;
  std::unordered_map<std::string, int> col_index;
  std::vector<Term> objective;
  bool in_marker = false;

  auto number = [](const std::string& tok, int line) {
    auto v = Rational::Parse(tok);
    if (!v) throw MpsError(line, "bad number '" + tok + "'");
    return *v;
  };
  auto row_of = [&](const std::string& name, int line) -> int {
    if (name == obj_row) return -1;
    auto it = row_index.find(name);
    if (it == row_index.end()) throw MpsError(line, "unknown row '" + name + "'");
    return it->second;
  };
  auto col_of = [&](const std::string& name, int line) -> int {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw MpsError(line, "unknown column '" + name + "'");
    return it->second;
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    auto f = Split(raw);
    if (f.empty()) continue;
    const bool header = !std::isspace(static_cast<unsigned char>(raw[0]));
    if (header) {
      const std::string& kw = f[0];
      if (kw == "NAME") {
        section = Section::kName;
        if (f.size() > 1) model_name = f[1];
      } else if (kw == "ROWS") {
        section = Section::kRows;
      } else if (kw == "COLUMNS") {
        section = Section::kColumns;
      } else if (kw == "RHS") {
        section = Section::kRhs;
      } else if (kw == "BOUNDS") {
        section = Section::kBounds;
      } else if (kw == "RANGES") {
        throw MpsError(line_no, "RANGES section is not supported");
      } else if (kw == "ENDATA") {
        section = Section::kEnd;
        break;
      } else {
        throw MpsError(line_no, "unknown section '" + kw + "'");
      }
      continue;
    }
    switch (section) {
      case Section::kRows: {
        if (f.size() != 2) throw MpsError(line_no, "ROWS entry needs type and name");
        const std::string& type = f[0];
        if (type == "N") {
          if (!obj_row.empty()) throw MpsError(line_no, "more than one objective row");
          obj_row = f[1];
          break;
        }
        Sense sense;
        if (type == "L") sense = Sense::kLe;
        else if (type == "G") sense = Sense::kGe;
        else if (type == "E") sense = Sense::kEq;
        else throw MpsError(line_no, "bad row type '" + type + "'");
        if (row_index.count(f[1]) || f[1] == obj_row) throw MpsError(line_no, "duplicate row '" + f[1] + "'");
        row_index[f[1]] = static_cast<int>(rows.size());
        rows.push_back({f[1], sense, {}, Rational(0)});
        break;
      }
      case Section::kColumns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") in_marker = true;
          else if (f[2] == "'INTEND'") in_marker = false;
          else throw MpsError(line_no, "bad marker '" + f[2] + "'");
          break;
        }
        if (f.size() != 3 && f.size() != 5) throw MpsError(line_no, "COLUMNS entry needs 3 or 5 fields");
        auto it = col_index.find(f[0]);
        int c;
        if (it == col_index.end()) {
          c = static_cast<int>(cols.size());
          col_index[f[0]] = c;
          cols.push_back({f[0], in_marker, false, Rational(0), std::nullopt});
        } else {
          c = it->second;
          if (c != static_cast<int>(cols.size()) - 1) {
            throw MpsError(line_no, "column '" + f[0] + "' is not contiguous");
          }
        }
        for (size_t k = 1; k + 1 < f.size(); k += 2) {
          int r = row_of(f[k], line_no);
          Rational v = number(f[k + 1], line_no);
          if (r < 0) {
            objective.push_back({v, c});
          } else {
            rows[r].terms.push_back({v, c});
          }
        }
        break;
      }
      case Section::kRhs: {
        if (f.size() != 3 && f.size() != 5) throw MpsError(line_no, "RHS entry needs 3 or 5 fields");
        for (size_t k = 1; k + 1 < f.size(); k += 2) {
          int r = row_of(f[k], line_no);
          if (r < 0) throw MpsError(line_no, "objective offsets are not supported");
          rows[r].rhs = number(f[k + 1], line_no);
        }
        break;
      }
      case Section::kBounds: {
        if (f.size() < 3) throw MpsError(line_no, "BOUNDS entry too short");
        const std::string& type = f[0];
        auto& col = cols[col_of(f[2], line_no)];
        const bool valued = type == "LO" || type == "UP" || type == "FX" || type == "LI" || type == "UI";
        if (valued && f.size() != 4) throw MpsError(line_no, "bound " + type + " needs a value");
        if (!valued && f.size() != 3) throw MpsError(line_no, "bound " + type + " takes no value");
        if (type == "LO" || type == "LI") {
          col.lower = number(f[3], line_no);
          if (type == "LI") col.integer = true;
        } else if (type == "UP" || type == "UI") {
          col.upper = number(f[3], line_no);
          if (type == "UI") col.integer = true;
        } else if (type == "FX") {
          col.lower = col.upper = number(f[3], line_no);
        } else if (type == "FR") {
          col.lower.reset();
          col.upper.reset();
        } else if (type == "MI") {
          col.lower.reset();
        } else if (type == "PL") {
          col.upper.reset();
        } else if (type == "BV") {
          col.binary = true;
          col.lower = Rational(0);
          col.upper = Rational(1);
        } else {
          throw MpsError(line_no, "bad bound type '" + type + "'");
        }
        break;
      }
      default:
        throw MpsError(line_no, "data line outside a section");
    }
  }
  if (section != Section::kEnd) throw MpsError(line_no, "missing ENDATA");
  if (obj_row.empty()) throw MpsError(line_no, "no objective row");

  ModelIR model(model_name);
  try {
    for (const auto& c : cols) {
      VarKind kind = c.binary ? VarKind::kBinary : c.integer ? VarKind::kInteger : VarKind::kContinuous;
      VarId id = model.AddVar(c.name, kind, c.lower, c.upper);
      if (c.binary) {
        if (!c.lower || !c.upper || *c.lower < Rational(0) || *c.upper > Rational(1)) {
          throw ModelError("binary column '" + c.name + "' has bounds outside [0,1]");
        }
        model.SetBounds(id, c.lower, c.upper);
      }
    }
    for (auto& r : rows) model.AddConstraint(r.name, std::move(r.terms), r.sense, r.rhs);
    model.SetObjective(std::move(objective));
  } catch (const ModelError& e) {
    throw MpsError(line_no, e.what());
  }
  return model;
}

std::string ExportLp(const ModelIR& model) {
  RequireValid(model);
  std::ostringstream out;
  auto write_terms = [&](const std::vector<Term>& terms) {
    if (terms.empty()) {
      out << " 0 " << model.var(0).name;
      return;
    }
    int on_line = 0;
    bool first = true;
    for (const auto& t : terms) {
      if (on_line == 8) {
        out << "\n  ";
        on_line = 0;
      }
      Rational c = t.coef;
      if (c.sign() < 0) {
        out << " - ";
        c = -c;
      } else if (!first) {
        out << " + ";
      } else {
        out << " ";
      }
      if (c != Rational(1)) out << FormatNumber(c) << " ";
      out << model.var(t.var).name;
      first = false;
      ++on_line;
    }
  };
  out << "\\ " << model.name() << "\n";
  out << "Minimize\n obj:";
  write_terms(model.objective());
  out << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out << " " << c.name << ":";
    write_terms(c.terms);
    out << " " << (c.sense == Sense::kLe ? "<=" : c.sense == Sense::kGe ? ">=" : "=") << " "
        << FormatNumber(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.vars()) {
    if (v.kind == VarKind::kBinary && v.lower && v.upper && v.lower->is_zero() && *v.upper == Rational(1)) continue;
    if (!v.lower && !v.upper) {
      out << " " << v.name << " free\n";
    } else if (v.lower && v.upper && *v.lower == *v.upper) {
      out << " " << v.name << " = " << FormatNumber(*v.lower) << "\n";
    } else {
      out << " " << (v.lower ? FormatNumber(*v.lower) : std::string("-inf")) << " <= " << v.name;
      if (v.upper) out << " <= " << FormatNumber(*v.upper);
      out << "\n";
    }
  }
  bool any_general = false;
  for (const auto& v : model.vars()) {
    if (v.kind != VarKind::kInteger) continue;
    if (!any_general) out << "Generals\n";
    any_general = true;
    out << " " << v.name << "\n";
  }
  bool any_binary = false;
  for (const auto& v : model.vars()) {
    if (v.kind != VarKind::kBinary) continue;
    if (!any_binary) out << "Binaries\n";
    any_binary = true;
    out << " " << v.name << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace twoscvrp
