#ifndef NVGEN_CAMPAIGN_HPP
#define NVGEN_CAMPAIGN_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nvgen/analysis.hpp"
#include "nvgen/ast.hpp"
#include "nvgen/diff.hpp"
#include "nvgen/interp.hpp"
#include "nvgen/parser.hpp"
#include "nvgen/printer.hpp"
#include "nvgen/rng.hpp"
#include "nvgen/stats.hpp"
#include "nvgen/targeted.hpp"
#include "nvgen/trace.hpp"
#include "nvgen/transform.hpp"
#include "nvgen/typecheck.hpp"

namespace nvgen {

struct CorpusSanityFailure : std::runtime_error {
  explicit CorpusSanityFailure(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct CampaignConfig {
  std::vector<std::string> corpusPaths;  // .mini files, campaign order
  std::vector<TransfoKind> transfoKinds{TransfoKind::Add, TransfoKind::Delete,
                                        TransfoKind::Replace};
  long long budget = 200;  // generic attempts; targeted kinds run exhaustively
  std::uint64_t seed = 0;
  long long fuel = 1000000;
  int maxDepth = 200;
  int amiCapPerLocation = 10;
  double ciLevel = 0.95;
  long long binMinTransformations = 4000;
  int minTrialsPerStratum = 25;
  int jobs = 1;
  bool wilson = false;
  std::string traceCacheDir;  // "" -> $NVGEN_TRACE_CACHE or .nvgen-trace-cache
  std::map<std::string, std::vector<std::string>> registryExtensions;

  RunLimits limits() const { return RunLimits{fuel, maxDepth}; }

  bool hasKind(TransfoKind k) const {
    for (auto t : transfoKinds)
      if (t == k) return true;
    return false;
  }
};

struct CorpusEntry {
  std::string path;
  std::string sourceText;     // canonical pretty-printed form
  Program program;
  CoverageMap coverage;
  int classCount = 0;
  int statementCount = 0;
  int testCount = 0;
  int coveredCount = 0;
};

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

struct VariantRecord {
  long long attempt = -1;
  std::string programPath;
  TransfoKind kind = TransfoKind::Add;
  std::uint64_t attemptSeed = 0;

  std::string locationId;  // empty when no location was resolved
  std::string locationKind;
  int coveringTestCount = 0;

  bool applicable = false;
  std::string notApplicableReason;
  std::optional<Verdict> verdict;
  std::string failingTest;

  bool diverged = false;
  std::string divergenceTest;
  long long divergenceEventIndex = -1;
  std::string divergenceSummary;

  // provenance, sufficient to rebuild the variant
  std::string transplantSourceId;
  std::string transplantKind;
  std::map<std::string, std::string> binding;
  std::map<std::string, std::string> freshNames;
  long long rewritingCount = 0;
  std::string methodRef;
  std::string receiverUsed;
  std::vector<std::string> argsUsed;
  std::string wellField;
  std::string catchVar;
  std::string interfaceName;
  std::string fromClass;
  std::string targetClass;
  std::string loopProbeLabel;

  // transient payloads for the variants directory (not part of report.json)
  std::string variantSource;
  std::string diffText;
};

struct KindTally {
  long long attempted = 0;
  long long notApplicable = 0;
  long long compiled = 0;
  long long neutral = 0;
  long long testFailing = 0;
  long long nonCompiling = 0;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<CorpusEntry> corpus;  // programs included (coverage recomputed)
  std::vector<VariantRecord> records;
  std::map<TransfoKind, KindTally> tallies;
  double explorationRate = 0;
  long long distinctLocationsTried = 0;
  long long totalCoveredStatements = 0;
};

// ---------------------------------------------------------------------------
// Trace cache: original traces keyed by content hash, stored on disk
// ---------------------------------------------------------------------------

class TraceCache {
 public:
  explicit TraceCache(std::string dir) : dir_(std::move(dir)) {}

  static std::string defaultDir() {
    if (const char* env = std::getenv("NVGEN_TRACE_CACHE")) return env;
    return ".nvgen-trace-cache";
  }

  const ExecutionTrace& get(const CorpusEntry& entry, const std::string& test,
                            const ProbeConfig& cfg, RunLimits limits) {
    std::string key =
        hashHex(hash64(entry.sourceText + "\x01" + test + "\x01" + cfg.key()));
    std::lock_guard<std::mutex> lock(mu_);
    auto it = mem_.find(key);
    if (it != mem_.end()) return it->second;

    namespace fs = std::filesystem;
    fs::path file = fs::path(dir_) / (key + ".jsonl");
    if (!dir_.empty() && fs::exists(file)) {
      std::ifstream in(file);
      std::stringstream ss;
      ss << in.rdbuf();
      return mem_.emplace(key, ExecutionTrace::fromJsonl(ss.str())).first->second;
    }

    ProgramInfo info(entry.program);
    TestOutcome out = runTest(entry.program, info, test, cfg, limits);
    if (!dir_.empty()) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (!ec) {
        std::ofstream of(file);
        of << out.trace.toJsonl();
      }
    }
    return mem_.emplace(key, std::move(out.trace)).first->second;
  }

 private:
  std::string dir_;
  std::mutex mu_;
  std::map<std::string, ExecutionTrace> mem_;
};

// Transformation-specific probe selections
inline ProbeConfig probeConfigFor(const Variant& v) {
  switch (v.kind) {
    case TransfoKind::Ami:
      return ProbeConfig::callsOnly();
    case TransfoKind::LoopFlip:
      return ProbeConfig::loopIndexAt(v.loopProbeLabel);
    case TransfoKind::SwapSubtype:
      return ProbeConfig::callsWithBuiltins();
    default:
      return ProbeConfig::callsAndBranches();
  }
}

// ---------------------------------------------------------------------------
// Verdict gate
// ---------------------------------------------------------------------------

// Compile gate, then the covering tests, then the rest of the suite.
inline Verdict classifyVariant(const Variant& v, const std::vector<std::string>& coveringTests,
                               RunLimits limits, std::string* failingTest = nullptr) {
  CheckResult chk = typeCheck(v.program);
  if (!chk.ok()) return Verdict::NonCompiling;
  ProgramInfo info(v.program);
  Interpreter in(v.program, info);
  std::set<std::string> covering(coveringTests.begin(), coveringTests.end());
  for (const auto& t : coveringTests) {
    TestOutcome out = in.runTest(t, ProbeConfig{}, limits);
    if (out.status != TestStatus::Pass) {
      if (failingTest) *failingTest = t;
      return Verdict::TestFailing;
    }
  }
  for (const auto& t : v.program.tests) {
    if (covering.count(t.name)) continue;
    TestOutcome out = in.runTest(t.name, ProbeConfig{}, limits);
    if (out.status != TestStatus::Pass) {
      if (failingTest) *failingTest = t.name;
      return Verdict::TestFailing;
    }
  }
  return Verdict::Neutral;
}

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint64_t kSaltGeneric = 0x67656e65726963ULL;
constexpr std::uint64_t kSaltAmiSample = 0x616d692d73ULL;
constexpr std::uint64_t kSaltAmiEval = 0x616d692d65ULL;

struct AttemptSpec {
  long long index = 0;
  bool generic = false;
  TransfoKind kind = TransfoKind::Add;
  int programIdx = -1;
  StmtId locationId;
  bool hasLocation = false;
  MethodRef methodRef;
  std::string targetClass;
  std::string interfaceName;
  std::string fromClass;
  std::string naReason;  // pre-resolved not-applicable
};

}  // namespace detail

inline CorpusEntry loadCorpusEntry(const std::string& path, const std::string& source,
                                   RunLimits limits) {
  CorpusEntry e;
  e.path = path;
  Program parsed = parse(source);
  e.sourceText = prettyPrint(parsed);
  e.program = parse(e.sourceText);  // canonical tree
  CheckResult chk = typeCheck(e.program);
  if (!chk.ok()) {
    std::string msg = path + " does not typecheck:";
    for (const auto& err : chk.errors) msg += "\n  " + err.message;
    throw CorpusSanityFailure(msg);
  }
  ProgramInfo info(e.program);
  SuiteResult suite = runSuite(e.program, info, ProbeConfig{}, limits);
  for (const auto& o : suite.outcomes)
    if (o.status != TestStatus::Pass)
      throw CorpusSanityFailure(path + ": test " + o.testName + " is " +
                                testStatusName(o.status) + " on the original program");
  e.coverage = computeCoverage(e.program, info, limits);
  e.classCount = static_cast<int>(e.program.classes.size());
  e.statementCount = static_cast<int>(enumerateStatements(e.program).size());
  e.testCount = static_cast<int>(e.program.tests.size());
  e.coveredCount = static_cast<int>(e.coverage.perStatement.size());
  return e;
}

class CampaignRunner {
 public:
  CampaignRunner(CampaignConfig cfg, std::vector<CorpusEntry> corpus)
      : cfg_(std::move(cfg)),
        corpus_(std::move(corpus)),
        cache_(cfg_.traceCacheDir.empty() ? TraceCache::defaultDir() : cfg_.traceCacheDir) {}

  CampaignReport run() {
    buildAttempts();
    records_.assign(attempts_.size(), VariantRecord{});
    evaluateAll();

    CampaignReport report;
    report.config = cfg_;
    report.corpus = corpus_;
    report.records = std::move(records_);
    tally(report);
    return report;
  }

 private:
  CampaignConfig cfg_;
  std::vector<CorpusEntry> corpus_;
  TraceCache cache_;
  std::vector<detail::AttemptSpec> attempts_;
  std::vector<VariantRecord> records_;

  void buildAttempts() {
    long long index = 0;
    bool genericPlaced = false;
    for (TransfoKind kind : cfg_.transfoKinds) {
      switch (kind) {
        case TransfoKind::Add:
        case TransfoKind::Delete:
        case TransfoKind::Replace:
          if (!genericPlaced) {
            for (long long i = 0; i < cfg_.budget; ++i) {
              detail::AttemptSpec spec;
              spec.index = index++;
              spec.generic = true;
              attempts_.push_back(std::move(spec));
            }
            genericPlaced = true;
          }
          break;
        case TransfoKind::Ami:
          buildAmiAttempts(index);
          break;
        case TransfoKind::SwapSubtype:
          buildSwapAttempts(index);
          break;
        case TransfoKind::LoopFlip:
          buildFlipAttempts(index);
          break;
      }
    }
  }

  void buildAmiAttempts(long long& index) {
    long long locOrdinal = 0;
    for (int pi = 0; pi < static_cast<int>(corpus_.size()); ++pi) {
      const CorpusEntry& entry = corpus_[pi];
      ProgramInfo info(entry.program);
      for (const StmtId& id : entry.coverage.coveredIds()) {
        Location loc = makeLocation(entry.program, entry.coverage, id);
        MethodCandidateSet cands = accessibleMethods(entry.program, info, loc);
        Rng rng = Rng::child(cfg_.seed, detail::kSaltAmiSample, locOrdinal++);
        if (cands.candidates.empty()) {
          detail::AttemptSpec spec;
          spec.index = index++;
          spec.kind = TransfoKind::Ami;
          spec.programIdx = pi;
          spec.locationId = id;
          spec.hasLocation = true;
          spec.naReason = "NoAccessibleMethods";
          attempts_.push_back(std::move(spec));
          continue;
        }
        int total = static_cast<int>(cands.candidates.size());
        int take = std::min(cfg_.amiCapPerLocation, total);
        for (int idx : rng.sampleWithoutReplacement(total, take)) {
          detail::AttemptSpec spec;
          spec.index = index++;
          spec.kind = TransfoKind::Ami;
          spec.programIdx = pi;
          spec.locationId = id;
          spec.hasLocation = true;
          spec.methodRef = cands.candidates[idx];
          attempts_.push_back(std::move(spec));
        }
      }
    }
  }

  void buildSwapAttempts(long long& index) {
    for (int pi = 0; pi < static_cast<int>(corpus_.size()); ++pi) {
      const CorpusEntry& entry = corpus_[pi];
      ProgramInfo info(entry.program);
      SwapRegistry registry = SwapRegistry::forProgram(entry.program);
      for (const auto& [iface, classes] : cfg_.registryExtensions)
        for (const auto& cls : classes) registry.add(iface, cls);
      for (const SwapCandidate& cand : enumerateSwapCandidates(entry.program, info)) {
        if (!entry.coverage.covered(cand.id)) {
          detail::AttemptSpec spec;
          spec.index = index++;
          spec.kind = TransfoKind::SwapSubtype;
          spec.programIdx = pi;
          spec.locationId = cand.id;
          spec.hasLocation = true;
          spec.interfaceName = cand.interfaceName;
          spec.fromClass = cand.currentClass;
          spec.naReason = "LocationNotCovered";
          attempts_.push_back(std::move(spec));
          continue;
        }
        std::vector<std::string> alts =
            registry.alternatives(cand.interfaceName, cand.currentClass);
        if (alts.empty()) {
          detail::AttemptSpec spec;
          spec.index = index++;
          spec.kind = TransfoKind::SwapSubtype;
          spec.programIdx = pi;
          spec.locationId = cand.id;
          spec.hasLocation = true;
          spec.interfaceName = cand.interfaceName;
          spec.fromClass = cand.currentClass;
          spec.naReason = "NoAlternativeImpl";
          attempts_.push_back(std::move(spec));
          continue;
        }
        for (const std::string& target : alts) {
          detail::AttemptSpec spec;
          spec.index = index++;
          spec.kind = TransfoKind::SwapSubtype;
          spec.programIdx = pi;
          spec.locationId = cand.id;
          spec.hasLocation = true;
          spec.interfaceName = cand.interfaceName;
          spec.fromClass = cand.currentClass;
          spec.targetClass = target;
          attempts_.push_back(std::move(spec));
        }
      }
    }
  }

  void buildFlipAttempts(long long& index) {
    for (int pi = 0; pi < static_cast<int>(corpus_.size()); ++pi) {
      const CorpusEntry& entry = corpus_[pi];
      for (const LoopCandidate& lc : enumerateCountedLoops(entry.program)) {
        detail::AttemptSpec spec;
        spec.index = index++;
        spec.kind = TransfoKind::LoopFlip;
        spec.programIdx = pi;
        spec.locationId = lc.id;
        spec.hasLocation = true;
        if (!entry.coverage.covered(lc.id)) spec.naReason = "LocationNotCovered";
        attempts_.push_back(std::move(spec));
      }
    }
  }

  void evaluateAll() {
    int jobs = std::max(1, cfg_.jobs);
    if (jobs == 1) {
      for (const auto& spec : attempts_) records_[spec.index] = evaluate(spec);
      return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= attempts_.size()) return;
        records_[attempts_[i].index] = evaluate(attempts_[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  VariantRecord evaluate(const detail::AttemptSpec& spec) {
    VariantRecord rec;
    rec.attempt = spec.index;
    rec.kind = spec.kind;
    rec.attemptSeed = cfg_.seed ^ static_cast<std::uint64_t>(spec.index);

    if (spec.generic) return evaluateGeneric(spec, rec);

    rec.programPath = corpus_[spec.programIdx].path;
    if (spec.hasLocation) {
      rec.locationId = spec.locationId.str();
      const Stmt* s = findStmt(corpus_[spec.programIdx].program, spec.locationId);
      if (s) rec.locationKind = stmtKindName(s->kind);
      rec.coveringTestCount = corpus_[spec.programIdx].coverage.tcOf(spec.locationId);
    }
    if (!spec.naReason.empty()) {
      rec.notApplicableReason = spec.naReason;
      return rec;
    }

    const CorpusEntry& entry = corpus_[spec.programIdx];
    ProgramInfo info(entry.program);
    try {
      Variant v = buildTargetedVariant(spec, entry, info);
      rec.applicable = true;
      fillProvenance(rec, v);
      runGates(entry, v, rec);
    } catch (const std::runtime_error& e) {
      rec.applicable = false;
      rec.notApplicableReason = e.what();
    }
    return rec;
  }

  Variant buildTargetedVariant(const detail::AttemptSpec& spec, const CorpusEntry& entry,
                               const ProgramInfo& info) {
    switch (spec.kind) {
      case TransfoKind::Ami: {
        Location loc = makeLocation(entry.program, entry.coverage, spec.locationId);
        Rng rng = Rng::child(cfg_.seed, detail::kSaltAmiEval,
                             static_cast<std::uint64_t>(spec.index));
        return applyAddMethodInvocation(entry.program, info, loc, spec.methodRef, rng);
      }
      case TransfoKind::SwapSubtype: {
        SwapRegistry registry = SwapRegistry::forProgram(entry.program);
        for (const auto& [iface, classes] : cfg_.registryExtensions)
          for (const auto& cls : classes) registry.add(iface, cls);
        SwapCandidate cand{spec.locationId, spec.interfaceName, spec.fromClass};
        return applySwapSubtype(entry.program, info, cand, spec.targetClass, registry);
      }
      case TransfoKind::LoopFlip:
        return flipLoop(entry.program, spec.locationId);
      default:
        throw std::runtime_error("bad targeted kind");
    }
  }

  VariantRecord evaluateGeneric(const detail::AttemptSpec& spec, VariantRecord rec) {
    Rng rng = Rng::child(cfg_.seed, detail::kSaltGeneric,
                         static_cast<std::uint64_t>(spec.index));

    std::vector<TransfoKind> genericKinds;
    for (TransfoKind k : cfg_.transfoKinds)
      if (k == TransfoKind::Add || k == TransfoKind::Delete || k == TransfoKind::Replace)
        genericKinds.push_back(k);

    int pi = rng.pick(static_cast<int>(corpus_.size()));
    const CorpusEntry& entry = corpus_[pi];
    rec.programPath = entry.path;
    TransfoKind kind = genericKinds[rng.pick(static_cast<int>(genericKinds.size()))];
    rec.kind = kind;

    ProgramInfo info(entry.program);
    try {
      Location loc = selectLocation(entry.program, entry.coverage, rng);
      rec.locationId = loc.id.str();
      rec.locationKind = stmtKindName(loc.nodeKind);
      rec.coveringTestCount = static_cast<int>(loc.coveringTests.size());

      Variant v = [&]() -> Variant {
        switch (kind) {
          case TransfoKind::Delete:
            return applyDelete(entry.program, loc);
          case TransfoKind::Add:
          case TransfoKind::Replace: {
            TransplantMode mode =
                kind == TransfoKind::Add ? TransplantMode::Add : TransplantMode::Replace;
            std::vector<TransplantCandidate> cands =
                findCompatibleTransplants(entry.program, info, loc, mode);
            if (cands.empty()) throw PreconditionViolated("NoCompatibleTransplant");
            const TransplantCandidate& pick =
                cands[rng.pick(static_cast<int>(cands.size()))];
            BoundTransplant bound = bindTransplant(entry.program, info, pick.sourceId, loc, rng);
            return kind == TransfoKind::Add ? applyAdd(entry.program, loc, bound)
                                            : applyReplace(entry.program, info, loc, bound);
          }
          default:
            throw std::runtime_error("bad generic kind");
        }
      }();
      rec.applicable = true;
      fillProvenance(rec, v);
      runGates(entry, v, rec);
    } catch (const std::runtime_error& e) {
      rec.applicable = false;
      rec.notApplicableReason = e.what();
    }
    return rec;
  }

  void fillProvenance(VariantRecord& rec, const Variant& v) {
    rec.locationId = v.locationId.str();
    rec.locationKind = stmtKindName(v.locationKind);
    if (v.transplantSourceId) rec.transplantSourceId = v.transplantSourceId->str();
    if (v.transplantKind) rec.transplantKind = stmtKindName(*v.transplantKind);
    rec.binding = v.binding;
    rec.freshNames = v.freshNames;
    rec.rewritingCount = v.rewritingCount;
    rec.methodRef = v.methodRef;
    rec.receiverUsed = v.receiverUsed;
    rec.argsUsed = v.argsUsed;
    rec.wellField = v.wellField;
    rec.catchVar = v.catchVar;
    rec.interfaceName = v.interfaceName;
    rec.fromClass = v.fromClass;
    rec.targetClass = v.targetClass;
    rec.loopProbeLabel = v.loopProbeLabel;
  }

  void runGates(const CorpusEntry& entry, const Variant& v, VariantRecord& rec) {
    rec.variantSource = prettyPrint(v.program);
    rec.diffText = unifiedDiff(entry.sourceText, rec.variantSource, entry.path,
                               entry.path + " (variant)");

    CheckResult chk = typeCheck(v.program);
    if (!chk.ok()) {
      rec.verdict = Verdict::NonCompiling;
      return;
    }

    RunLimits limits = cfg_.limits();
    ProbeConfig probeCfg = probeConfigFor(v);
    ProgramInfo vinfo(v.program);
    Interpreter vi(v.program, vinfo);

    std::vector<std::string> covering = entry.coverage.perStatement.at(v.locationId);
    std::set<std::string> coveringSet(covering.begin(), covering.end());

    // covering tests first, compared on the fly against the cached original
    for (const std::string& t : covering) {
      const ExecutionTrace& original = cache_.get(entry, t, probeCfg, limits);
      StreamingComparator cmp(original);
      TestOutcome out = vi.runTest(t, probeCfg, limits, &cmp);
      DivergenceResult dr = cmp.finish();
      if (dr.diverged && !rec.diverged) {
        rec.diverged = true;
        rec.divergenceTest = t;
        rec.divergenceEventIndex = dr.firstDivergenceIndex;
        rec.divergenceSummary = dr.summary;
      }
      if (out.status != TestStatus::Pass) {
        rec.verdict = Verdict::TestFailing;
        rec.failingTest = t;
        return;
      }
    }

    // remaining tests, probes off
    for (const auto& t : v.program.tests) {
      if (coveringSet.count(t.name)) continue;
      TestOutcome out = vi.runTest(t.name, ProbeConfig{}, limits);
      if (out.status != TestStatus::Pass) {
        rec.verdict = Verdict::TestFailing;
        rec.failingTest = t.name;
        return;
      }
    }
    rec.verdict = Verdict::Neutral;
  }

  void tally(CampaignReport& report) {
    std::set<std::pair<std::string, std::string>> locations;
    for (const auto& rec : report.records) {
      KindTally& t = report.tallies[rec.kind];
      ++t.attempted;
      if (!rec.applicable) {
        ++t.notApplicable;
      } else if (rec.verdict) {
        switch (*rec.verdict) {
          case Verdict::NonCompiling:
            ++t.nonCompiling;
            break;
          case Verdict::TestFailing:
            ++t.compiled;
            ++t.testFailing;
            break;
          case Verdict::Neutral:
            ++t.compiled;
            ++t.neutral;
            break;
        }
      }
      if (!rec.locationId.empty()) locations.insert({rec.programPath, rec.locationId});
    }
    report.distinctLocationsTried = static_cast<long long>(locations.size());
    long long covered = 0;
    for (const auto& e : report.corpus) covered += e.coveredCount;
    report.totalCoveredStatements = covered;
    report.explorationRate =
        covered == 0 ? 0.0
                     : static_cast<double>(report.distinctLocationsTried) /
                           static_cast<double>(covered);
  }
};

inline CampaignReport runCampaignOn(const CampaignConfig& cfg,
                                    const std::vector<std::pair<std::string, std::string>>&
                                        namedSources) {
  std::vector<CorpusEntry> corpus;
  for (const auto& [path, source] : namedSources)
    corpus.push_back(loadCorpusEntry(path, source, cfg.limits()));
  if (corpus.empty()) throw CorpusSanityFailure("empty corpus");
  return CampaignRunner(cfg, std::move(corpus)).run();
}

inline CampaignReport runCampaign(const CampaignConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> sources;
  for (const auto& path : cfg.corpusPaths) {
    std::ifstream in(path);
    if (!in) throw CorpusSanityFailure("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    sources.emplace_back(path, ss.str());
  }
  return runCampaignOn(cfg, sources);
}

// ---------------------------------------------------------------------------
// Variant replay: rebuild a recorded variant from its provenance
// ---------------------------------------------------------------------------

inline Variant rebuildVariant(const CorpusEntry& entry, const VariantRecord& rec) {
  ProgramInfo info(entry.program);
  StmtId locId = StmtId::parse(rec.locationId).value();
  std::string kind = rec.kind == TransfoKind::Add      ? "add"
                     : rec.kind == TransfoKind::Delete ? "delete"
                                                       : "";
  switch (rec.kind) {
    case TransfoKind::Delete: {
      Location loc = makeLocation(entry.program, entry.coverage, locId);
      return applyDelete(entry.program, loc);
    }
    case TransfoKind::Add:
    case TransfoKind::Replace: {
      Location loc = makeLocation(entry.program, entry.coverage, locId);
      StmtId srcId = StmtId::parse(rec.transplantSourceId).value();
      BoundTransplant bound =
          bindTransplantExplicit(entry.program, info, srcId, loc, rec.binding);
      return rec.kind == TransfoKind::Add ? applyAdd(entry.program, loc, bound)
                                          : applyReplace(entry.program, info, loc, bound);
    }
    case TransfoKind::Ami: {
      Location loc = makeLocation(entry.program, entry.coverage, locId);
      MethodCandidateSet cands = accessibleMethods(entry.program, info, loc);
      for (const MethodRef& ref : cands.candidates) {
        if (ref.qualified() != rec.methodRef) continue;
        return applyAddMethodInvocationExplicit(entry.program, info, loc, ref,
                                                rec.receiverUsed, rec.argsUsed);
      }
      throw std::runtime_error("recorded method " + rec.methodRef + " not found");
    }
    case TransfoKind::SwapSubtype: {
      SwapRegistry registry = SwapRegistry::forProgram(entry.program);
      registry.add(rec.interfaceName, rec.targetClass);
      SwapCandidate cand{locId, rec.interfaceName, rec.fromClass};
      return applySwapSubtype(entry.program, info, cand, rec.targetClass, registry);
    }
    case TransfoKind::LoopFlip:
      return flipLoop(entry.program, locId);
  }
  throw std::runtime_error("bad record kind");
}

}  // namespace nvgen

#endif  // NVGEN_CAMPAIGN_HPP
