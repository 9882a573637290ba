#include <istream>
#include <ostream>
#include <sstream>

#include "optheap/harness.hpp"

namespace optheap::harness {

std::string format_op(const TraceOp& op) {
  std::ostringstream os;
  switch (op.kind) {
    case TraceOp::New:
      os << "new " << op.q1;
      break;
    case TraceOp::Insert:
      os << "insert " << op.q1 << ' ' << op.key;
      break;
    case TraceOp::DeleteMin:
      os << "deletemin " << op.q1;
      break;
    case TraceOp::Decrease:
      os << "decrease " << op.q1 << ' ' << op.seq << ' ' << op.key;
      break;
    case TraceOp::Delete:
      os << "delete " << op.q1 << ' ' << op.seq;
      break;
    case TraceOp::Meld:
      os << "meld " << op.q1 << ' ' << op.q2 << " -> " << op.q3;
      break;
    case TraceOp::Destroy:
      os << "destroy " << op.q1;
      break;
  }
  return os.str();
}

void write_trace(std::ostream& os, const std::vector<TraceOp>& ops) {
  for (const TraceOp& op : ops) os << format_op(op) << '\n';
}

ParsedTrace parse_trace(std::istream& is) {
  ParsedTrace out;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.error = msg;
    out.error_line = lineno;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    TraceOp op{};
    bool good = true;
    if (word == "new") {
      op.kind = TraceOp::New;
      good = bool(ss >> op.q1);
    } else if (word == "insert") {
      op.kind = TraceOp::Insert;
      good = bool(ss >> op.q1 >> op.key);
    } else if (word == "deletemin") {
      op.kind = TraceOp::DeleteMin;
      good = bool(ss >> op.q1);
    } else if (word == "decrease") {
      op.kind = TraceOp::Decrease;
      good = bool(ss >> op.q1 >> op.seq >> op.key);
    } else if (word == "delete") {
      op.kind = TraceOp::Delete;
      good = bool(ss >> op.q1 >> op.seq);
    } else if (word == "meld") {
      op.kind = TraceOp::Meld;
      std::string arrow;
      good = bool(ss >> op.q1 >> op.q2 >> arrow >> op.q3) && arrow == "->";
    } else if (word == "destroy") {
      op.kind = TraceOp::Destroy;
      good = bool(ss >> op.q1);
    } else {
      fail("unknown command '" + word + "'");
      return out;
    }
    if (!good) {
      fail("malformed arguments for '" + word + "'");
      return out;
    }
    std::string extra;
    if (ss >> extra) {
      fail("trailing tokens after '" + word + "'");
      return out;
    }
    out.ops.push_back(op);
  }
  return out;
}

std::string dump_tree(const INode* n) {
  if (!n) return "-";
  std::string s = "(" + std::to_string(n->element) + ":" + std::to_string(n->rank);
  // children first to last
  std::vector<const INode*> kids;
  for (const INode* c = n->last_child; c; c = c->left) kids.push_back(c);
  for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
    s += ' ';
    s += dump_tree(*it);
  }
  s += ')';
  return s;
}

std::string dump_queue(const IQueue& q) {
  std::string s = "size=" + std::to_string(q.size());
  if (q.size() > 0) s += " min=" + std::to_string(q.find_min()->element);
  s += " T1=" + dump_tree(q.t1());
  s += " T2=" + dump_tree(q.t2());
  return s;
}

}  // namespace optheap::harness
