#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "modalrisk/formula.hpp"

namespace modalrisk {

struct GovernanceThresholds {
  double alpha = 0.8;  // endorse
  double beta = 0.2;   // monitor
  double eta = 0.5;    // hesitation review
  double delta = 0.5;  // audit item
  double iota = 0.5;   // revision trigger

  void validate() const {
    for (double v : {alpha, beta, eta, delta, iota})
      if (!in_unit_interval(v))
        throw ValueError("governance threshold out of [0,1]");
  }
};

enum class GovernanceAction {
  Endorse,
  MonitorOrEscalate,
  RecordHesitationRequireReview,
  OpenMetaAuditItem
};

inline std::string_view governance_action_name(GovernanceAction a) {
  switch (a) {
    case GovernanceAction::Endorse: return "endorse";
    case GovernanceAction::MonitorOrEscalate: return "monitor_or_escalate";
    case GovernanceAction::RecordHesitationRequireReview:
      return "record_hesitation_require_review";
    case GovernanceAction::OpenMetaAuditItem: return "open_meta_audit_item";
  }
  return "endorse";
}

using ActionSet = std::set<GovernanceAction>;

// Threshold rule over one world's statuses. Pure. Zero-degree diagnostics
// never open audit items, whatever delta is.
inline ActionSet apply_rule(const StatusBundle& bundle, double moore_degree,
                            const GovernanceThresholds& th, std::size_t w) {
  th.validate();
  if (!in_unit_interval(moore_degree))
    throw ValueError("moore degree out of [0,1]");
  if (w >= bundle.box.size()) throw FrameError("world index out of range");
  ActionSet out;
  if (bundle.box[w] >= th.alpha) out.insert(GovernanceAction::Endorse);
  if (bundle.diamond[w] >= th.beta && bundle.box[w] < th.alpha)
    out.insert(GovernanceAction::MonitorOrEscalate);
  if (bundle.hesitation[w] >= th.eta)
    out.insert(GovernanceAction::RecordHesitationRequireReview);
  if (moore_degree >= th.delta && moore_degree > 0.0)
    out.insert(GovernanceAction::OpenMetaAuditItem);
  return out;
}

enum class AuditStatus { Open, Reviewed, Escalated, ClosedWithJustification };

inline std::string_view audit_status_name(AuditStatus s) {
  switch (s) {
    case AuditStatus::Open: return "open";
    case AuditStatus::Reviewed: return "reviewed";
    case AuditStatus::Escalated: return "escalated";
    case AuditStatus::ClosedWithJustification:
      return "closed_with_justification";
  }
  return "open";
}

inline AuditStatus audit_status_from_name(std::string_view name) {
  if (name == "open") return AuditStatus::Open;
  if (name == "reviewed") return AuditStatus::Reviewed;
  if (name == "escalated") return AuditStatus::Escalated;
  if (name == "closed_with_justification")
    return AuditStatus::ClosedWithJustification;
  throw ValueError("unknown audit status: " + std::string(name));
}

struct DiagnosticKey {
  std::string kind;         // moore, anti, unsup, conf, disagreement, ...
  std::string proposition;  // canonical formula text or proposition name
  std::string standard;
  std::string world;

  auto operator<=>(const DiagnosticKey&) const = default;
};

enum class AuditEventType { Record, Raise, Transition };

inline std::string_view audit_event_type_name(AuditEventType t) {
  switch (t) {
    case AuditEventType::Record: return "record";
    case AuditEventType::Raise: return "raise";
    case AuditEventType::Transition: return "transition";
  }
  return "record";
}

struct AuditEvent {
  std::uint64_t seq = 0;
  std::int64_t ts = 0;
  AuditEventType type = AuditEventType::Record;
  DiagnosticKey key;
  double degree = 0.0;   // stored degree after the event
  AuditStatus status = AuditStatus::Open;  // status after the event
};

struct AuditItem {
  DiagnosticKey key;
  double degree = 0.0;
  AuditStatus status = AuditStatus::Open;
  std::vector<AuditEvent> history;  // every event that touched this item
};

// Append-only diagnostic register. Recording is idempotent per key and
// degree-monotone; items stay queryable forever, closure included. The
// event log captures state changes only, so replaying it reconstructs the
// register bit-exactly. Timestamps default to logical time (= seq) for
// deterministic output; inject a clock for wall time.
class AuditRegister : public AuditLookup {
 public:
  using Clock = std::function<std::int64_t(std::uint64_t seq)>;

  AuditRegister() = default;
  explicit AuditRegister(Clock clock) : clock_(std::move(clock)) {}

  // True when the register changed (new item or raised degree).
  bool record(const DiagnosticKey& key, double degree) {
    if (!in_unit_interval(degree))
      throw ValueError("audit degree out of [0,1]");
    auto it = items_.find(key);
    if (it == items_.end()) {
      AuditEvent ev = make_event(AuditEventType::Record, key, degree,
                                 AuditStatus::Open);
      AuditItem item{key, degree, AuditStatus::Open, {ev}};
      items_.emplace(key, std::move(item));
      events_.push_back(std::move(ev));
      return true;
    }
    if (degree <= it->second.degree) return false;  // idempotent, monotone
    AuditEvent ev = make_event(AuditEventType::Raise, key, degree,
                               it->second.status);
    it->second.degree = degree;
    it->second.history.push_back(ev);
    events_.push_back(std::move(ev));
    return true;
  }

  bool transition(const DiagnosticKey& key, AuditStatus status) {
    auto it = items_.find(key);
    if (it == items_.end())
      throw ValueError("transition on unknown audit item: " + key.proposition);
    if (it->second.status == status) return false;
    AuditEvent ev = make_event(AuditEventType::Transition, key,
                               it->second.degree, status);
    it->second.status = status;
    it->second.history.push_back(ev);
    events_.push_back(std::move(ev));
    return true;
  }

  const AuditItem* find(const DiagnosticKey& key) const {
    auto it = items_.find(key);
    return it == items_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return items_.size(); }

  std::vector<const AuditItem*> items() const {
    std::vector<const AuditItem*> out;
    out.reserve(items_.size());
    for (const auto& [k, v] : items_) out.push_back(&v);
    return out;
  }

  const std::vector<AuditEvent>& events() const { return events_; }

  // Max recorded degree matching (proposition, world), any kind/standard.
  double audit_degree(const std::string& proposition,
                      const std::string& world) const override {
    double best = 0.0;
    for (const auto& [key, item] : items_)
      if (key.proposition == proposition && key.world == world)
        best = std::max(best, item.degree);
    return best;
  }

  void write_events(std::ostream& out) const {
    for (const auto& ev : events_) out << event_to_json(ev).dump() << '\n';
  }

  static AuditRegister replay(std::istream& in) {
    AuditRegister reg;
    std::string line;
    std::uint64_t expect_seq = 1;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ValueError(std::string("bad event log line: ") + e.what());
      }
      AuditEvent ev;
      ev.seq = doc.at("seq").get<std::uint64_t>();
      ev.ts = doc.at("ts").get<std::int64_t>();
      const std::string type = doc.at("event").get<std::string>();
      ev.key = {doc.at("kind").get<std::string>(),
                doc.at("prop").get<std::string>(),
                doc.at("std").get<std::string>(),
                doc.at("world").get<std::string>()};
      ev.degree = doc.at("degree").get<double>();
      ev.status = audit_status_from_name(doc.at("status").get<std::string>());
      if (ev.seq != expect_seq)
        throw ValueError("event log sequence gap at " + std::to_string(ev.seq));
      ++expect_seq;
      if (type == "record" || type == "raise") {
        ev.type = type == "record" ? AuditEventType::Record
                                   : AuditEventType::Raise;
        reg.apply_degree_event(ev);
      } else if (type == "transition") {
        ev.type = AuditEventType::Transition;
        reg.apply_transition_event(ev);
      } else {
        throw ValueError("unknown event type: " + type);
      }
    }
    return reg;
  }

  // Canonical serialization of the full state (items, degrees, statuses,
  // histories). Two registers are equal iff their digests match.
  std::string state_digest() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [key, item] : items_) {
      nlohmann::ordered_json entry;
      entry["kind"] = key.kind;
      entry["prop"] = key.proposition;
      entry["std"] = key.standard;
      entry["world"] = key.world;
      entry["degree"] = item.degree;
      entry["status"] = std::string(audit_status_name(item.status));
      nlohmann::ordered_json hist = nlohmann::ordered_json::array();
      for (const auto& ev : item.history) hist.push_back(event_to_json(ev));
      entry["history"] = std::move(hist);
      arr.push_back(std::move(entry));
    }
    return arr.dump();
  }

 private:
  AuditEvent make_event(AuditEventType type, const DiagnosticKey& key,
                        double degree, AuditStatus status) {
    AuditEvent ev;
    ev.seq = next_seq_++;
    ev.ts = clock_ ? clock_(ev.seq) : static_cast<std::int64_t>(ev.seq);
    ev.type = type;
    ev.key = key;
    ev.degree = degree;
    ev.status = status;
    return ev;
  }

  static nlohmann::ordered_json event_to_json(const AuditEvent& ev) {
    nlohmann::ordered_json doc;
    doc["seq"] = ev.seq;
    doc["ts"] = ev.ts;
    doc["event"] = std::string(audit_event_type_name(ev.type));
    doc["kind"] = ev.key.kind;
    doc["prop"] = ev.key.proposition;
    doc["std"] = ev.key.standard;
    doc["world"] = ev.key.world;
    doc["degree"] = ev.degree;
    doc["status"] = std::string(audit_status_name(ev.status));
    return doc;
  }

  // Replay paths: apply a parsed event verbatim, keeping seq/ts.
  void apply_degree_event(const AuditEvent& ev) {
    auto it = items_.find(ev.key);
    if (it == items_.end())
      items_.emplace(ev.key, AuditItem{ev.key, ev.degree, ev.status, {ev}});
    else {
      it->second.degree = ev.degree;
      it->second.history.push_back(ev);
    }
    events_.push_back(ev);
    next_seq_ = ev.seq + 1;
  }

  void apply_transition_event(const AuditEvent& ev) {
    auto it = items_.find(ev.key);
    if (it == items_.end())
      throw ValueError("transition before record in event log");
    it->second.status = ev.status;
    it->second.history.push_back(ev);
    events_.push_back(ev);
    next_seq_ = ev.seq + 1;
  }

  std::map<DiagnosticKey, AuditItem> items_;
  std::vector<AuditEvent> events_;
  std::uint64_t next_seq_ = 1;
  Clock clock_;
};

// Convenience free function mirroring the mutating member.
inline AuditRegister& audit_record(AuditRegister& reg, const DiagnosticKey& key,
                                   double degree) {
  reg.record(key, degree);
  return reg;
}

// ---------------------------------------------------------------------------
// Typed reachability.

struct ReachEntry {
  std::string proposition;  // name (level 0) or diagnostic text (level 1)
  bool holds = false;
  double max_gap = 0.0;
  std::string worst_world;
};

struct ReachReport {
  std::vector<ReachEntry> reach0;        // p <= <M>[M]p
  std::vector<ReachEntry> reach1;        // d <= <A>(A d)
  std::vector<std::string> obligations;  // emitted meta obligations, as text
  // Structural assertion: no obligation requires Box(std, diagnostic).
  bool box_obligation_emitted = false;
};

// A Box above the audit operator would demand endorsement of the failure
// diagnostic itself. Boxes inside the audited diagnostic are its quoted
// content, so recursion stops at the audit node.
inline bool obligation_requires_box(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Box:
      return true;
    case Formula::Kind::Atom:
    case Formula::Kind::Audit:
      return false;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return obligation_requires_box(f.left()) ||
             obligation_requires_box(f.right());
    default:
      return obligation_requires_box(f.left());
  }
}

// Reach0: every object-level risk must reach endorsement through its own
// standard. Reach1: every moore diagnostic must reach auditability through
// the audit standard; recording the diagnostic is part of the check. When
// the frame carries no audit relation the identity relation is used, which
// makes auditability reachable as soon as recording happens. Obligations
// are emitted in diamond form only; requiring Box(std, d) is exactly the
// collapse this layer exists to avoid, so its absence is asserted on the
// report.
inline ReachReport typed_reach_check(const Frame& f, std::string_view standard,
                                     std::string_view audit_std,
                                     const std::vector<std::string>& risk0,
                                     const AlgebraPackage& pkg) {
  ReachReport report;
  AuditRegister reg;

  for (const std::string& name : risk0) {
    const Proposition& p = f.proposition(name);

    const Proposition reach0_rhs =
        diamond(f, standard, box(f, standard, p, pkg), pkg);
    ReachEntry e0{name, true, 0.0, ""};
    for (std::size_t w = 0; w < p.size(); ++w) {
      const double gap = p[w] - reach0_rhs[w];
      if (gap > e0.max_gap) {
        e0.max_gap = gap;
        e0.worst_world = f.world_name(w);
      }
    }
    e0.holds = e0.max_gap <= kMeasureTolerance;
    report.reach0.push_back(std::move(e0));

    // Level-1 diagnostic d = p & ![M]p, recorded at its degree per world.
    const Proposition d = refine_moore(f, standard, p, pkg);
    const Formula d_formula = Formula::conjunction(
        Formula::atom(name),
        Formula::negation(Formula::box(std::string(standard),
                                       Formula::atom(name))));
    const std::string d_text = d_formula.str();
    for (std::size_t w = 0; w < d.size(); ++w)
      if (d[w] > 0.0)
        reg.record({"moore", d_text, std::string(standard), f.world_name(w)},
                   d[w]);

    std::vector<double> ad_vals(f.world_count());
    for (std::size_t w = 0; w < ad_vals.size(); ++w)
      ad_vals[w] = reg.audit_degree(d_text, f.world_name(w));
    const Proposition ad(std::move(ad_vals));

    const Proposition reach1_rhs =
        f.has_relation(audit_std) ? diamond(f, audit_std, ad, pkg)
                                  : ad;  // identity audit relation
    ReachEntry e1{d_text, true, 0.0, ""};
    for (std::size_t w = 0; w < d.size(); ++w) {
      const double gap = d[w] - reach1_rhs[w];
      if (gap > e1.max_gap) {
        e1.max_gap = gap;
        e1.worst_world = f.world_name(w);
      }
    }
    e1.holds = e1.max_gap <= kMeasureTolerance;
    report.reach1.push_back(std::move(e1));

    const std::string obligation =
        "<" + std::string(audit_std) + ">A(" + d_text + ")";
    if (obligation_requires_box(parse_formula(obligation)))
      report.box_obligation_emitted = true;
    report.obligations.push_back(obligation);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Commitment timeline: revision (*) versus update (⋄).

enum class EpochChange { Initial, Revision, Update };

inline std::string_view epoch_change_name(EpochChange c) {
  switch (c) {
    case EpochChange::Initial: return "initial";
    case EpochChange::Revision: return "revision";
    case EpochChange::Update: return "update";
  }
  return "initial";
}

struct CommitmentEpoch {
  std::uint64_t t = 0;
  double belief_p = 0.0;
  double belief_not_p = 0.0;
  bool review_flagged = false;
  EpochChange change = EpochChange::Initial;
  std::string note;              // evidence note e_t or environment note c_t
  std::string relation_version;  // which Gamma_B produced the statuses
};

class CommitmentTimeline {
 public:
  CommitmentTimeline(std::string proposition, CommitmentEpoch initial)
      : proposition_(std::move(proposition)) {
    initial.change = EpochChange::Initial;
    epochs_.push_back(std::move(initial));
  }

  const std::string& proposition() const { return proposition_; }
  const std::vector<CommitmentEpoch>& epochs() const { return epochs_; }
  const CommitmentEpoch& current() const { return epochs_.back(); }

  void append(CommitmentEpoch e) {
    if (e.t <= epochs_.back().t)
      throw ValueError("timeline epochs must be strictly increasing");
    epochs_.push_back(std::move(e));
  }

 private:
  std::string proposition_;
  std::vector<CommitmentEpoch> epochs_;
};

// Modal statuses of the committed proposition at the current epoch.
struct CommitmentSnapshot {
  double belief_p = 0.0;
  double belief_not_p = 0.0;
  double diamond_p = 0.0;
  double hesitation_p = 0.0;
  double inconsistency_p = 0.0;
};

struct RevisionEvent {
  EpochChange kind = EpochChange::Revision;  // Revision or Update
  std::string note;
  std::string relation_version;
};

// Applies the threshold revision schema and appends epoch t+1. Priority is
// withdraw-before-adopt: inconsistency-triggered withdrawal runs before
// precautionary adoption, so a freshly withdrawn commitment may be re-adopted
// from diamond support in the same step. No trigger => degrees carry over
// unchanged.
inline CommitmentTimeline revise_commitments(CommitmentTimeline tl,
                                             const CommitmentSnapshot& s,
                                             const GovernanceThresholds& th,
                                             const RevisionEvent& event) {
  th.validate();
  if (event.kind == EpochChange::Initial)
    throw ValueError("epoch change must be revision or update");
  CommitmentEpoch next;
  next.t = tl.current().t + 1;
  next.belief_p = s.belief_p;
  next.belief_not_p = s.belief_not_p;
  if (s.inconsistency_p >= th.iota) {
    next.belief_p = 0.0;
    next.belief_not_p = 0.0;
  }
  next.review_flagged = s.hesitation_p >= th.eta;
  if (s.diamond_p >= th.beta && next.belief_p < th.alpha)
    next.belief_p = s.diamond_p;
  next.change = event.kind;
  next.note = event.note;
  next.relation_version = event.relation_version;
  tl.append(std::move(next));
  return tl;
}

// ---------------------------------------------------------------------------
// Fragmented multi-operator diagnostics.

struct CrossDiagnostic {
  std::string kind;  // disagreement | mistaken_reliance |
                     // mistaken_higher_order_commitment
  std::string first;   // standard used positively
  std::string second;  // standard used negatively
  Proposition degrees;
  std::vector<std::size_t> flagged;  // worlds with degree >= delta (and > 0)
};

// All ordered cross-standard diagnostics for one proposition. The two
// higher-order kinds share the shape first(second p) & !(second p); the
// label follows the inner standard's role: reflexive inner standards are
// knowledge-like, so trusting them mistakenly is mistaken reliance.
inline std::vector<CrossDiagnostic> cross_diagnostics(
    const Frame& f, std::string_view prop_name, const AlgebraPackage& pkg,
    double delta, AuditRegister* reg = nullptr) {
  if (!in_unit_interval(delta)) throw ValueError("delta out of [0,1]");
  const std::vector<std::string> standards = f.standards();
  if (standards.size() < 2)
    throw FrameError("cross diagnostics need at least two standards");
  const Proposition& p = f.proposition(prop_name);

  std::vector<CrossDiagnostic> out;
  auto emit = [&](std::string kind, const std::string& i,
                  const std::string& j, Proposition degrees,
                  const std::string& text) {
    CrossDiagnostic d{std::move(kind), i, j, std::move(degrees), {}};
    for (std::size_t w = 0; w < d.degrees.size(); ++w)
      if (d.degrees[w] >= delta && d.degrees[w] > 0.0) {
        d.flagged.push_back(w);
        if (reg)
          reg->record({d.kind, text, i + "/" + j, f.world_name(w)},
                      d.degrees[w]);
      }
    out.push_back(std::move(d));
  };

  for (const std::string& i : standards) {
    const Proposition box_i_p = box(f, i, p, pkg);
    for (const std::string& j : standards) {
      if (i == j) continue;
      const Proposition box_j_p = box(f, j, p, pkg);
      emit("disagreement", i, j, meet(box_i_p, negate(box_j_p)),
           "[" + i + "]" + std::string(prop_name) + " & ![" + j + "]" +
               std::string(prop_name));

      const bool inner_reflexive = classify_frame(f, j, pkg).reflexive;
      const Proposition nested =
          meet(box(f, i, box_j_p, pkg), negate(box_j_p));
      emit(inner_reflexive ? "mistaken_reliance"
                           : "mistaken_higher_order_commitment",
           i, j, nested,
           "[" + i + "][" + j + "]" + std::string(prop_name) + " & ![" + j +
               "]" + std::string(prop_name));
    }
  }
  return out;
}

}  // namespace modalrisk
