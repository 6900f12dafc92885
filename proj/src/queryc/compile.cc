#include <sstream>

#include "wcetw/error.h"
#include "wcetw/queryc.h"

namespace wcetw::queryc {

using logic::NodeKind;

const char* stmt_name(StmtKind k) {
  switch (k) {
    case StmtKind::kForEach: return "foreach";
    case StmtKind::kAssign: return "assign";
    case StmtKind::kIf: return "if";
    case StmtKind::kEmit: return "emit";
  }
  return "?";
}

std::optional<int> ProgramIR::statement_at(int line) const {
  if (line == entry_line() || line == exit_line()) return std::nullopt;
  if (line < 0 || line > exit_line()) {
    throw Error(ErrorKind::kTraceGap, "line " + std::to_string(line) + " maps to no statement");
  }
  return line - 1;
}

ProgramIR compile_search_plan(const SearchPlan& sp, const model::Metamodel* mm) {
  {
    std::vector<Atom> atoms;
    for (const auto& step : sp.steps) atoms.push_back(step.atom);
    const SearchPlan checked = infer_op_types(sp.name, sp.params, atoms);
    for (size_t i = 0; i < sp.steps.size(); ++i) {
      if (checked.steps[i].op != sp.steps[i].op || checked.steps[i].fresh != sp.steps[i].fresh) {
        throw Error(ErrorKind::kIllFormedPlan, "step " + std::to_string(i + 1) + " has inconsistent operation type");
      }
    }
  }
  ProgramIR ir;
  ir.query = sp.name;
  ir.params = sp.params;
  auto add = [&](Statement st) {
    st.line = static_cast<int>(ir.stmts.size()) + 1;
    ir.stmts.push_back(std::move(st));
  };
  for (const auto& step : sp.steps) {
    const Atom& a = step.atom;
    if (step.op == OpType::kCheck) {
      add(Statement{StmtKind::kIf, step.index, 0, "", Navigation::kNone, a, {}});
      continue;
    }
    switch (a.kind) {
      case NodeKind::kClass:
        add(Statement{StmtKind::kForEach, step.index, 0, step.fresh[0], Navigation::kClassScan, a, {}});
        break;
      case NodeKind::kEquals:
        add(Statement{StmtKind::kAssign, step.index, 0, step.fresh[0], Navigation::kAlias, a, {}});
        break;
      case NodeKind::kRelation: {
        if (step.fresh.size() == 2) {
          add(Statement{StmtKind::kForEach, step.index, 0, step.fresh[0], Navigation::kSourceScan, a, {step.fresh[1]}});
          add(Statement{StmtKind::kForEach, step.index, 0, step.fresh[1], Navigation::kForward, a, {}});
        } else if (a.vars[0] == a.vars[1]) {
          add(Statement{StmtKind::kForEach, step.index, 0, step.fresh[0], Navigation::kSourceScan, a, {}});
        } else if (a.vars[1] == step.fresh[0]) {
          const model::RelationDecl* decl = mm ? mm->relation(a.symbol) : nullptr;
          const bool single = decl && decl->upper_bound && *decl->upper_bound == 1;
          add(Statement{single ? StmtKind::kAssign : StmtKind::kForEach, step.index, 0, step.fresh[0],
                        Navigation::kForward, a, {}});
        } else {
          add(Statement{StmtKind::kForEach, step.index, 0, step.fresh[0], Navigation::kBackward, a, {}});
        }
        break;
      }
      default:
        throw Error(ErrorKind::kUnknownConstraintKind, "unsupported constraint kind");
    }
  }
  add(Statement{StmtKind::kEmit, 0, 0, "", Navigation::kNone, Atom{}, {}});
  return ir;
}

std::string dump(const ProgramIR& ir) {
  std::ostringstream out;
  out << ir.entry_line() << ": entry " << ir.query << "(";
  for (size_t i = 0; i < ir.params.size(); ++i) out << (i ? ", " : "") << ir.params[i];
  out << ")\n";
  int depth = 1;
  for (const auto& st : ir.stmts) {
    out << st.line << ": " << std::string(2 * depth, ' ');
    switch (st.kind) {
      case StmtKind::kForEach:
        out << "foreach " << st.var << " with " << st.atom.text();
        break;
      case StmtKind::kAssign:
        out << "if some " << st.var << " with " << st.atom.text() << " then assign";
        break;
      case StmtKind::kIf:
        out << "if " << st.atom.text();
        break;
      case StmtKind::kEmit:
        out << "emit (";
        for (size_t i = 0; i < ir.params.size(); ++i) out << (i ? ", " : "") << ir.params[i];
        out << ")";
        break;
    }
    if (st.step > 0) out << "  # step " << st.step;
    out << "\n";
    ++depth;
  }
  out << ir.exit_line() << ": exit\n";
  return out.str();
}

}  // namespace wcetw::queryc
