#include "opalg/phenomenology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace opalg {

int PhenomenologicalTheory::outcome_index(const std::string& id) const {
  const auto it = outcome_lookup.find(id);
  if (it == outcome_lookup.end()) throw std::invalid_argument("unknown outcome id '" + id + "'");
  return it->second;
}

Event PhenomenologicalTheory::full_event(int measurement) const {
  return Event{measurement, meas_outcomes.at(measurement)};
}

namespace {

// Line-oriented tokenizer with column tracking for error messages.
struct Cursor {
  const std::string& text;
  int line;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  int col() const { return static_cast<int>(pos) + 1; }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line, col(), msg); }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    const size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '+' || text[pos] == '-')) {
      ++pos;
    }
    if (pos == start) fail("expected identifier");
    return text.substr(start, pos - start);
  }
  Rat rational() {
    skip_ws();
    const size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '/' || text[pos] == '-')) {
      ++pos;
    }
    if (pos == start) fail("expected rational p/q");
    try {
      return rat_from_string(text.substr(start, pos - start));
    } catch (const std::invalid_argument& e) {
      pos = start;
      fail(e.what());
    }
  }
};

struct RawState {
  std::string id;
  std::vector<std::pair<std::string, Rat>> entries;
  int line;
};

struct RawEvent {
  std::string measurement;
  std::vector<std::string> outcomes;
};

RawEvent parse_event_expr(Cursor& c) {
  RawEvent ev;
  ev.measurement = c.ident();
  c.expect('.');
  c.expect('{');
  if (!c.accept('}')) {
    do {
      ev.outcomes.push_back(c.ident());
    } while (c.accept(','));
    c.expect('}');
  }
  return ev;
}

}  // namespace

PhenomenologicalTheory parse_theory(const std::string& text) {
  PhenomenologicalTheory t;
  std::vector<RawState> raw_states;
  struct RawConstraint {
    RawEvent lhs, rhs;
    std::string text;
    int line;
  };
  std::vector<RawConstraint> raw_constraints;
  struct RawTree {
    std::string id;
    std::string root;
    std::vector<std::pair<std::string, std::string>> branches;  // outcome -> meas | "leaf"
    int line;
  };
  std::vector<RawTree> raw_trees;
  struct RawSeq {
    std::string state;
    std::vector<std::string> outcomes;
    Rat prob;
    int line;
  };
  std::vector<RawSeq> raw_seq;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    Cursor c{line, lineno};
    if (c.done()) continue;
    const std::string kw = c.ident();
    if (kw == "measurement") {
      Measurement m;
      m.id = c.ident();
      c.expect('=');
      c.expect('{');
      if (!c.accept('}')) {
        do {
          m.outcomes.push_back(c.ident());
        } while (c.accept(','));
        c.expect('}');
      }
      if (!c.done()) c.fail("trailing junk after measurement");
      if (m.outcomes.empty()) c.fail("measurement needs at least one outcome");
      t.measurements.push_back(std::move(m));
    } else if (kw == "state") {
      RawState s;
      s.id = c.ident();
      s.line = lineno;
      c.expect('=');
      c.expect('{');
      if (!c.accept('}')) {
        do {
          std::string out = c.ident();
          c.expect(':');
          Rat p = c.rational();
          s.entries.emplace_back(std::move(out), std::move(p));
        } while (c.accept(','));
        c.expect('}');
      }
      if (!c.done()) c.fail("trailing junk after state");
      raw_states.push_back(std::move(s));
    } else if (kw == "constraint") {
      RawConstraint rc;
      rc.line = lineno;
      rc.lhs = parse_event_expr(c);
      c.expect('=');
      c.expect('=');
      rc.rhs = parse_event_expr(c);
      rc.text = line;
      if (!c.done()) c.fail("trailing junk after constraint");
      raw_constraints.push_back(std::move(rc));
    } else if (kw == "tree") {
      RawTree rt;
      rt.line = lineno;
      rt.id = c.ident();
      c.expect('=');
      rt.root = c.ident();
      c.expect('{');
      if (!c.accept('}')) {
        do {
          std::string out = c.ident();
          c.expect('-');
          c.expect('>');
          rt.branches.emplace_back(std::move(out), c.ident());
        } while (c.accept(','));
        c.expect('}');
      }
      if (!c.done()) c.fail("trailing junk after tree");
      raw_trees.push_back(std::move(rt));
    } else if (kw == "seqstate") {
      RawSeq rs;
      rs.line = lineno;
      rs.state = c.ident();
      rs.outcomes.push_back(c.ident());
      while (c.accept('.')) rs.outcomes.push_back(c.ident());
      c.expect('=');
      rs.prob = c.rational();
      if (!c.done()) c.fail("trailing junk after seqstate");
      raw_seq.push_back(std::move(rs));
    } else {
      c.fail("unknown directive '" + kw + "'");
    }
  }

  // Global outcome table; outcome ids must be disjoint across measurements.
  for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
    t.meas_outcomes.emplace_back();
    for (const auto& out : t.measurements[mi].outcomes) {
      if (t.outcome_lookup.count(out)) {
        throw ParseError(0, 0, "duplicate outcome id '" + out + "'");
      }
      const int g = static_cast<int>(t.outcome_ids.size());
      t.outcome_lookup[out] = g;
      t.outcome_ids.push_back(out);
      t.outcome_meas.push_back(static_cast<int>(mi));
      t.meas_outcomes[mi].push_back(g);
    }
  }

  std::set<std::string> state_ids;
  for (const auto& rs : raw_states) {
    if (!state_ids.insert(rs.id).second) {
      throw ParseError(rs.line, 1, "duplicate state id '" + rs.id + "'");
    }
    StateAssignment sa;
    sa.id = rs.id;
    sa.probs.assign(t.outcome_ids.size(), Rat(-1));
    for (const auto& [out, p] : rs.entries) {
      const auto it = t.outcome_lookup.find(out);
      if (it == t.outcome_lookup.end()) {
        throw ParseError(rs.line, 1, "state '" + rs.id + "' mentions unknown outcome '" + out + "'");
      }
      if (p < 0 || p > 1) {
        throw ParseError(rs.line, 1, "probability " + rat_to_string(p) + " outside [0,1]");
      }
      if (sa.probs[it->second] >= 0) {
        throw ParseError(rs.line, 1, "state '" + rs.id + "' assigns outcome '" + out + "' twice");
      }
      sa.probs[it->second] = p;
    }
    for (size_t g = 0; g < sa.probs.size(); ++g) {
      if (sa.probs[g] < 0) {
        throw ParseError(rs.line, 1,
                         "state '" + rs.id + "' missing outcome '" + t.outcome_ids[g] + "'");
      }
    }
    for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
      Rat sum(0);
      for (int g : t.meas_outcomes[mi]) sum += sa.probs[g];
      if (sum != 1) {
        throw ParseError(rs.line, 1,
                         "state '" + rs.id + "' sums to " + rat_to_string(sum) + " on measurement '" +
                             t.measurements[mi].id + "'");
      }
    }
    t.states.push_back(std::move(sa));
  }

  auto resolve_event = [&](const RawEvent& re, int line_no) {
    Event ev;
    bool found = false;
    for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
      if (t.measurements[mi].id == re.measurement) {
        ev.measurement = static_cast<int>(mi);
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(line_no, 1, "unknown measurement '" + re.measurement + "'");
    for (const auto& out : re.outcomes) {
      const auto it = t.outcome_lookup.find(out);
      if (it == t.outcome_lookup.end() || t.outcome_meas[it->second] != ev.measurement) {
        throw ParseError(line_no, 1,
                         "outcome '" + out + "' is not part of measurement '" + re.measurement + "'");
      }
      ev.outcomes.push_back(it->second);
    }
    std::sort(ev.outcomes.begin(), ev.outcomes.end());
    ev.outcomes.erase(std::unique(ev.outcomes.begin(), ev.outcomes.end()), ev.outcomes.end());
    return ev;
  };
  for (const auto& rc : raw_constraints) {
    t.constraints.push_back({resolve_event(rc.lhs, rc.line), resolve_event(rc.rhs, rc.line), rc.text});
  }

  for (const auto& rt : raw_trees) {
    DeclaredTree dt;
    dt.id = rt.id;
    int root = -1;
    for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
      if (t.measurements[mi].id == rt.root) root = static_cast<int>(mi);
    }
    if (root < 0) throw ParseError(rt.line, 1, "unknown root measurement '" + rt.root + "'");
    dt.root.measurement = root;
    dt.root.children.assign(t.meas_outcomes[root].size(), TreeNode{});
    for (const auto& [out, target] : rt.branches) {
      const auto it = t.outcome_lookup.find(out);
      if (it == t.outcome_lookup.end() || t.outcome_meas[it->second] != root) {
        throw ParseError(rt.line, 1, "branch outcome '" + out + "' not in root measurement");
      }
      const auto& outs = t.meas_outcomes[root];
      const int local =
          static_cast<int>(std::find(outs.begin(), outs.end(), it->second) - outs.begin());
      if (target == "leaf") continue;
      int child = -1;
      for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
        if (t.measurements[mi].id == target) child = static_cast<int>(mi);
      }
      if (child < 0) throw ParseError(rt.line, 1, "unknown child measurement '" + target + "'");
      dt.root.children[local].measurement = child;
      dt.root.children[local].children.assign(t.meas_outcomes[child].size(), TreeNode{});
    }
    t.declared_trees.push_back(std::move(dt));
  }

  for (const auto& rs : raw_seq) {
    if (!state_ids.count(rs.state)) {
      throw ParseError(rs.line, 1, "seqstate for unknown state '" + rs.state + "'");
    }
    for (const auto& out : rs.outcomes) {
      if (!t.outcome_lookup.count(out)) {
        throw ParseError(rs.line, 1, "seqstate mentions unknown outcome '" + out + "'");
      }
    }
    if (rs.prob < 0 || rs.prob > 1) {
      throw ParseError(rs.line, 1, "seqstate probability outside [0,1]");
    }
    t.seq_probs.push_back({rs.state, rs.outcomes, rs.prob});
  }

  if (t.states.empty()) throw ParseError(0, 0, "theory needs at least one state");
  return t;
}

std::string emit_theory(const PhenomenologicalTheory& t) {
  std::ostringstream os;
  for (const auto& m : t.measurements) {
    os << "measurement " << m.id << " = { ";
    for (size_t i = 0; i < m.outcomes.size(); ++i) os << (i ? ", " : "") << m.outcomes[i];
    os << " }\n";
  }
  for (const auto& s : t.states) {
    os << "state " << s.id << " = { ";
    bool first = true;
    for (size_t g = 0; g < s.probs.size(); ++g) {
      os << (first ? "" : ", ") << t.outcome_ids[g] << ": " << rat_to_string(s.probs[g]);
      first = false;
    }
    os << " }\n";
  }
  auto event_expr = [&](const Event& ev) {
    std::string out = t.measurements[ev.measurement].id + ".{";
    for (size_t i = 0; i < ev.outcomes.size(); ++i) {
      out += (i ? "," : "") + t.outcome_ids[ev.outcomes[i]];
    }
    return out + "}";
  };
  for (const auto& c : t.constraints) {
    os << "constraint " << event_expr(c.lhs) << " == " << event_expr(c.rhs) << "\n";
  }
  for (const auto& dt : t.declared_trees) {
    os << "tree " << dt.id << " = " << t.measurements[dt.root.measurement].id << " { ";
    const auto& outs = t.meas_outcomes[dt.root.measurement];
    for (size_t i = 0; i < outs.size(); ++i) {
      os << (i ? ", " : "") << t.outcome_ids[outs[i]] << " -> "
         << (dt.root.children[i].leaf() ? "leaf" : t.measurements[dt.root.children[i].measurement].id);
    }
    os << " }\n";
  }
  for (const auto& sp : t.seq_probs) {
    os << "seqstate " << sp.state << " ";
    for (size_t i = 0; i < sp.outcomes.size(); ++i) os << (i ? "." : "") << sp.outcomes[i];
    os << " = " << rat_to_string(sp.prob) << "\n";
  }
  return os.str();
}

AxiomReport validate_theory(const PhenomenologicalTheory& t) {
  AxiomReport r;
  r.profile = "theory";

  {  // Outcome sets of distinct measurements are disjoint.
    std::map<std::string, std::string> owner;
    bool ok = true;
    for (const auto& m : t.measurements) {
      for (const auto& out : m.outcomes) {
        auto [it, fresh] = owner.emplace(out, m.id);
        if (!fresh) {
          r.add("disjointness", false, {},
                "outcome '" + out + "' appears in '" + it->second + "' and '" + m.id + "'");
          ok = false;
        }
      }
    }
    if (ok) r.add("disjointness", true);
  }

  {  // Every outcome assigned by every state.
    bool ok = true;
    for (const auto& s : t.states) {
      if (s.probs.size() != t.outcome_ids.size()) {
        r.add("coverage", false, {}, "state '" + s.id + "' does not assign every outcome");
        ok = false;
        continue;
      }
      for (size_t g = 0; g < s.probs.size(); ++g) {
        if (s.probs[g] < 0 || s.probs[g] > 1) {
          r.add("coverage", false, {},
                "state '" + s.id + "' assigns " + rat_to_string(s.probs[g]) + " to '" +
                    t.outcome_ids[g] + "'");
          ok = false;
        }
      }
    }
    if (ok) r.add("coverage", true);
  }

  {  // Exact normalization per measurement per state.
    bool ok = true;
    for (const auto& s : t.states) {
      if (s.probs.size() != t.outcome_ids.size()) continue;
      for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
        Rat sum(0);
        for (int g : t.meas_outcomes[mi]) sum += s.probs[g];
        if (sum != 1) {
          r.add("normalization", false, {},
                "state '" + s.id + "' sums to " + rat_to_string(sum) + " on '" +
                    t.measurements[mi].id + "'");
          ok = false;
        }
      }
    }
    if (ok) r.add("normalization", true);
  }

  {  // Declared constraint lines hold in every state.
    bool ok = true;
    for (const auto& c : t.constraints) {
      for (size_t si = 0; si < t.states.size(); ++si) {
        const Rat lhs = event_probability(t, t.states[si], c.lhs);
        const Rat rhs = event_probability(t, t.states[si], c.rhs);
        if (lhs != rhs) {
          r.add("constraints", false, {static_cast<int>(si)},
                c.text + " fails in state '" + t.states[si].id + "': " + rat_to_string(lhs) +
                    " != " + rat_to_string(rhs));
          ok = false;
        }
      }
    }
    if (ok) r.add("constraints", true, {}, t.constraints.empty() ? "none declared" : "");
  }
  return r;
}

Rat event_probability(const PhenomenologicalTheory& t, const StateAssignment& state,
                      const Event& ev) {
  if (ev.measurement < 0 || ev.measurement >= static_cast<int>(t.measurements.size())) {
    throw std::invalid_argument("event references unknown measurement");
  }
  Rat sum(0);
  for (int g : ev.outcomes) {
    if (g < 0 || g >= static_cast<int>(t.outcome_ids.size()) || t.outcome_meas[g] != ev.measurement) {
      throw std::invalid_argument("event outcome outside its measurement");
    }
    sum += state.probs[g];
  }
  return sum;
}

Rat event_probability(const PhenomenologicalTheory& t, int state_index, const Event& ev) {
  return event_probability(t, t.states.at(state_index), ev);
}

Event make_event(const PhenomenologicalTheory& t, const std::string& measurement,
                 const std::vector<std::string>& outcomes) {
  Event ev;
  for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
    if (t.measurements[mi].id == measurement) ev.measurement = static_cast<int>(mi);
  }
  if (ev.measurement < 0) throw std::invalid_argument("unknown measurement '" + measurement + "'");
  for (const auto& out : outcomes) {
    const int g = t.outcome_index(out);
    if (t.outcome_meas[g] != ev.measurement) {
      throw std::invalid_argument("outcome '" + out + "' not in measurement '" + measurement + "'");
    }
    ev.outcomes.push_back(g);
  }
  std::sort(ev.outcomes.begin(), ev.outcomes.end());
  return ev;
}

}  // namespace opalg
