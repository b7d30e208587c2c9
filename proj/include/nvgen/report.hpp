#ifndef NVGEN_REPORT_HPP
#define NVGEN_REPORT_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvgen/campaign.hpp"
#include "nvgen/stats.hpp"

namespace nvgen {

inline constexpr const char* kReportSchema = "nvgen-report/1";

struct SchemaVersionMismatch : std::runtime_error {
  explicit SchemaVersionMismatch(const std::string& got)
      : std::runtime_error("report schema '" + got + "' does not match '" +
                           std::string(kReportSchema) + "'") {}
};

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline ordered_json recordToJson(const VariantRecord& r) {
  ordered_json j;
  j["attempt"] = r.attempt;
  j["program"] = r.programPath;
  j["kind"] = transfoKindName(r.kind);
  j["seed"] = r.attemptSeed;
  j["locationId"] = r.locationId;
  j["locationKind"] = r.locationKind;
  j["coveringTests"] = r.coveringTestCount;
  j["applicable"] = r.applicable;
  if (!r.applicable) {
    j["notApplicableReason"] = r.notApplicableReason;
    return j;
  }
  j["verdict"] = r.verdict ? verdictName(*r.verdict) : "";
  if (!r.failingTest.empty()) j["failingTest"] = r.failingTest;
  j["diverged"] = r.diverged;
  if (r.diverged) {
    j["divergenceTest"] = r.divergenceTest;
    j["divergenceEventIndex"] = r.divergenceEventIndex;
    j["divergenceSummary"] = r.divergenceSummary;
  }
  if (!r.transplantSourceId.empty()) {
    j["transplantSourceId"] = r.transplantSourceId;
    j["transplantKind"] = r.transplantKind;
    j["binding"] = r.binding;
    j["freshNames"] = r.freshNames;
    j["rewritingCount"] = r.rewritingCount;
  }
  if (!r.methodRef.empty()) {
    j["methodRef"] = r.methodRef;
    j["receiver"] = r.receiverUsed;
    j["args"] = r.argsUsed;
    j["wellField"] = r.wellField;
    j["catchVar"] = r.catchVar;
  }
  if (!r.targetClass.empty()) {
    j["interface"] = r.interfaceName;
    j["fromClass"] = r.fromClass;
    j["targetClass"] = r.targetClass;
  }
  if (!r.loopProbeLabel.empty()) j["loopProbeLabel"] = r.loopProbeLabel;
  if (r.kind == TransfoKind::Add || r.kind == TransfoKind::Replace)
    j["rewritingCount"] = r.rewritingCount;
  return j;
}

inline VariantRecord recordFromJson(const ordered_json& j) {
  VariantRecord r;
  r.attempt = j.at("attempt").get<long long>();
  r.programPath = j.at("program").get<std::string>();
  std::string kind = j.at("kind").get<std::string>();
  for (TransfoKind k : {TransfoKind::Add, TransfoKind::Delete, TransfoKind::Replace,
                        TransfoKind::Ami, TransfoKind::SwapSubtype, TransfoKind::LoopFlip})
    if (kind == transfoKindName(k)) r.kind = k;
  r.attemptSeed = j.at("seed").get<std::uint64_t>();
  r.locationId = j.at("locationId").get<std::string>();
  r.locationKind = j.at("locationKind").get<std::string>();
  r.coveringTestCount = j.at("coveringTests").get<int>();
  r.applicable = j.at("applicable").get<bool>();
  if (!r.applicable) {
    r.notApplicableReason = j.at("notApplicableReason").get<std::string>();
    return r;
  }
  std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "NonCompiling") r.verdict = Verdict::NonCompiling;
  else if (verdict == "TestFailing") r.verdict = Verdict::TestFailing;
  else if (verdict == "Neutral") r.verdict = Verdict::Neutral;
  if (j.contains("failingTest")) r.failingTest = j["failingTest"].get<std::string>();
  r.diverged = j.at("diverged").get<bool>();
  if (r.diverged) {
    r.divergenceTest = j["divergenceTest"].get<std::string>();
    r.divergenceEventIndex = j["divergenceEventIndex"].get<long long>();
    r.divergenceSummary = j["divergenceSummary"].get<std::string>();
  }
  if (j.contains("transplantSourceId")) {
    r.transplantSourceId = j["transplantSourceId"].get<std::string>();
    r.transplantKind = j["transplantKind"].get<std::string>();
    r.binding = j["binding"].get<std::map<std::string, std::string>>();
    r.freshNames = j["freshNames"].get<std::map<std::string, std::string>>();
    r.rewritingCount = j["rewritingCount"].get<long long>();
  }
  if (j.contains("methodRef")) {
    r.methodRef = j["methodRef"].get<std::string>();
    r.receiverUsed = j["receiver"].get<std::string>();
    r.argsUsed = j["args"].get<std::vector<std::string>>();
    r.wellField = j["wellField"].get<std::string>();
    r.catchVar = j["catchVar"].get<std::string>();
  }
  if (j.contains("targetClass")) {
    r.interfaceName = j["interface"].get<std::string>();
    r.fromClass = j["fromClass"].get<std::string>();
    r.targetClass = j["targetClass"].get<std::string>();
  }
  if (j.contains("loopProbeLabel")) r.loopProbeLabel = j["loopProbeLabel"].get<std::string>();
  return r;
}

inline ordered_json reportToJson(const CampaignReport& report) {
  ordered_json j;
  j["schema"] = kReportSchema;

  ordered_json cfg;
  cfg["corpusPaths"] = report.config.corpusPaths;
  std::vector<std::string> kinds;
  for (TransfoKind k : report.config.transfoKinds) kinds.push_back(transfoKindName(k));
  cfg["transfoKinds"] = kinds;
  cfg["budget"] = report.config.budget;
  cfg["seed"] = report.config.seed;
  cfg["fuel"] = report.config.fuel;
  cfg["maxDepth"] = report.config.maxDepth;
  cfg["amiCapPerLocation"] = report.config.amiCapPerLocation;
  cfg["ciLevel"] = report.config.ciLevel;
  cfg["binMinTransformations"] = report.config.binMinTransformations;
  cfg["minTrialsPerStratum"] = report.config.minTrialsPerStratum;
  cfg["wilson"] = report.config.wilson;
  j["config"] = cfg;

  ordered_json corpus = ordered_json::array();
  for (const auto& e : report.corpus) {
    ordered_json c;
    c["path"] = e.path;
    c["classes"] = e.classCount;
    c["statements"] = e.statementCount;
    c["tests"] = e.testCount;
    c["coveredStatements"] = e.coveredCount;
    c["coverage"] = e.statementCount == 0
                        ? 0.0
                        : static_cast<double>(e.coveredCount) / e.statementCount;
    corpus.push_back(c);
  }
  j["corpus"] = corpus;

  ordered_json tallies;
  for (const auto& [kind, t] : report.tallies) {
    ordered_json tj;
    tj["attempted"] = t.attempted;
    tj["notApplicable"] = t.notApplicable;
    tj["nonCompiling"] = t.nonCompiling;
    tj["compiled"] = t.compiled;
    tj["testFailing"] = t.testFailing;
    tj["neutral"] = t.neutral;
    tallies[transfoKindName(kind)] = tj;
  }
  j["tallies"] = tallies;
  j["explorationRate"] = report.explorationRate;
  j["distinctLocationsTried"] = report.distinctLocationsTried;
  j["totalCoveredStatements"] = report.totalCoveredStatements;

  ordered_json records = ordered_json::array();
  for (const auto& r : report.records) records.push_back(recordToJson(r));
  j["records"] = records;
  return j;
}

// Parses a serialized report; corpus programs are not reconstructed, only
// their summary counters.
inline CampaignReport reportFromJson(const ordered_json& j) {
  if (!j.contains("schema") || j["schema"].get<std::string>() != kReportSchema)
    throw SchemaVersionMismatch(j.value("schema", "<missing>"));
  CampaignReport report;
  const ordered_json& cfg = j.at("config");
  report.config.corpusPaths = cfg.at("corpusPaths").get<std::vector<std::string>>();
  for (const auto& k : cfg.at("transfoKinds").get<std::vector<std::string>>())
    for (TransfoKind kk : {TransfoKind::Add, TransfoKind::Delete, TransfoKind::Replace,
                           TransfoKind::Ami, TransfoKind::SwapSubtype, TransfoKind::LoopFlip})
      if (k == transfoKindName(kk)) report.config.transfoKinds.push_back(kk);
  report.config.budget = cfg.at("budget").get<long long>();
  report.config.seed = cfg.at("seed").get<std::uint64_t>();
  report.config.fuel = cfg.at("fuel").get<long long>();
  report.config.maxDepth = cfg.at("maxDepth").get<int>();
  report.config.amiCapPerLocation = cfg.at("amiCapPerLocation").get<int>();
  report.config.ciLevel = cfg.at("ciLevel").get<double>();
  report.config.binMinTransformations = cfg.at("binMinTransformations").get<long long>();
  report.config.minTrialsPerStratum = cfg.at("minTrialsPerStratum").get<int>();
  report.config.wilson = cfg.at("wilson").get<bool>();

  for (const auto& c : j.at("corpus")) {
    CorpusEntry e;
    e.path = c.at("path").get<std::string>();
    e.classCount = c.at("classes").get<int>();
    e.statementCount = c.at("statements").get<int>();
    e.testCount = c.at("tests").get<int>();
    e.coveredCount = c.at("coveredStatements").get<int>();
    report.corpus.push_back(std::move(e));
  }
  for (const auto& rj : j.at("records")) report.records.push_back(recordFromJson(rj));
  for (const auto& [name, tj] : j.at("tallies").items()) {
    for (TransfoKind kk : {TransfoKind::Add, TransfoKind::Delete, TransfoKind::Replace,
                           TransfoKind::Ami, TransfoKind::SwapSubtype, TransfoKind::LoopFlip})
      if (name == transfoKindName(kk)) {
        KindTally t;
        t.attempted = tj.at("attempted").get<long long>();
        t.notApplicable = tj.at("notApplicable").get<long long>();
        t.nonCompiling = tj.at("nonCompiling").get<long long>();
        t.compiled = tj.at("compiled").get<long long>();
        t.testFailing = tj.at("testFailing").get<long long>();
        t.neutral = tj.at("neutral").get<long long>();
        report.tallies[kk] = t;
      }
  }
  report.explorationRate = j.at("explorationRate").get<double>();
  report.distinctLocationsTried = j.at("distinctLocationsTried").get<long long>();
  report.totalCoveredStatements = j.at("totalCoveredStatements").get<long long>();
  return report;
}

// ---------------------------------------------------------------------------
// Derived statistics
// ---------------------------------------------------------------------------

struct NodeTypeStratum {
  TransfoKind kind;
  std::string nodeKind;  // transplant kind for add, location kind otherwise
  long long trials = 0;  // compiled variants
  long long neutral = 0;
  bool included = false;
  std::string omittedReason;
  double nvr = 0;
  ConfidenceInterval ci;
};

// NVR per (transformation, node type). Add is stratified by the transplant's
// node type, everything else by the location's.
inline std::vector<NodeTypeStratum> nvrByNodeType(const CampaignReport& report,
                                                  int minTrials = 25) {
  std::map<std::pair<std::string, std::string>, std::pair<long long, long long>> acc;
  std::map<std::pair<std::string, std::string>, TransfoKind> kinds;
  for (const auto& r : report.records) {
    if (!r.applicable || !r.verdict || *r.verdict == Verdict::NonCompiling) continue;
    std::string nodeKind =
        r.kind == TransfoKind::Add && !r.transplantKind.empty() ? r.transplantKind
                                                                : r.locationKind;
    auto key = std::make_pair(std::string(transfoKindName(r.kind)), nodeKind);
    acc[key].first += 1;
    if (*r.verdict == Verdict::Neutral) acc[key].second += 1;
    kinds[key] = r.kind;
  }
  std::vector<NodeTypeStratum> out;
  for (const auto& [key, counts] : acc) {
    NodeTypeStratum s;
    s.kind = kinds[key];
    s.nodeKind = key.second;
    s.trials = counts.first;
    s.neutral = counts.second;
    if (s.trials >= minTrials) {
      s.included = true;
      s.nvr = computeNvr(s.neutral, s.trials);
      s.ci = report.config.wilson ? wilsonCi(s.neutral, s.trials, report.config.ciLevel)
                                  : binomialCi(s.neutral, s.trials, report.config.ciLevel);
    } else {
      s.omittedReason = "below-min-trials(" + std::to_string(minTrials) + ")";
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct LocationSample {
  std::string program;
  std::string locationId;
  int tc = 0;
  long long compiled = 0;
  long long neutral = 0;
  long long transformations = 0;  // emitted variants incl. non-compiling
};

inline std::vector<LocationSample> perLocationSamples(const CampaignReport& report,
                                                      bool (*filter)(const VariantRecord&)) {
  std::map<std::pair<std::string, std::string>, LocationSample> acc;
  for (const auto& r : report.records) {
    if (!r.applicable || !r.verdict) continue;
    if (filter && !filter(r)) continue;
    auto key = std::make_pair(r.programPath, r.locationId);
    LocationSample& s = acc[key];
    s.program = r.programPath;
    s.locationId = r.locationId;
    s.tc = r.coveringTestCount;
    ++s.transformations;
    if (*r.verdict != Verdict::NonCompiling) {
      ++s.compiled;
      if (*r.verdict == Verdict::Neutral) ++s.neutral;
    }
  }
  std::vector<LocationSample> out;
  for (auto& [_, s] : acc) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), [](const LocationSample& a, const LocationSample& b) {
    if (a.tc != b.tc) return a.tc < b.tc;
    if (a.program != b.program) return a.program < b.program;
    return a.locationId < b.locationId;
  });
  return out;
}

struct CoverageBin {
  int tcMin = 0;
  int tcMax = 0;
  long long locations = 0;
  long long transformations = 0;
  long long compiled = 0;
  long long neutral = 0;
  bool nvrDefined = false;
  double nvr = 0;
  double q1 = 0, median = 0, q3 = 0;  // per-location NVR spread
};

namespace detail {
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  double h = (static_cast<double>(values.size()) - 1.0) * q;
  size_t lo = static_cast<size_t>(h);
  size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = h - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}
}  // namespace detail

// Greedy bins over locations sorted by covering-test count: each bin gathers
// at least binMin transformations, the trailing remainder joins the last bin.
inline std::vector<CoverageBin> nvrByCoverageBin(const CampaignReport& report,
                                                 long long binMinTransformations) {
  std::vector<LocationSample> locs = perLocationSamples(report, nullptr);
  std::vector<CoverageBin> bins;
  std::vector<double> locNvrs;
  CoverageBin cur;
  bool open = false;

  auto close = [&]() {
    if (!open) return;
    if (cur.compiled > 0) {
      cur.nvrDefined = true;
      cur.nvr = computeNvr(cur.neutral, cur.compiled);
    }
    cur.q1 = detail::quantile(locNvrs, 0.25);
    cur.median = detail::quantile(locNvrs, 0.5);
    cur.q3 = detail::quantile(locNvrs, 0.75);
    bins.push_back(cur);
    cur = CoverageBin{};
    locNvrs.clear();
    open = false;
  };

  for (const LocationSample& s : locs) {
    if (!open) {
      cur.tcMin = s.tc;
      open = true;
    }
    cur.tcMax = s.tc;
    ++cur.locations;
    cur.transformations += s.transformations;
    cur.compiled += s.compiled;
    cur.neutral += s.neutral;
    if (s.compiled > 0) locNvrs.push_back(computeNvr(s.neutral, s.compiled));
    if (cur.transformations >= binMinTransformations) close();
  }
  if (open) {
    if (!bins.empty()) {
      // remainder joins the last complete bin
      CoverageBin last = bins.back();
      bins.pop_back();
      last.tcMax = cur.tcMax;
      last.locations += cur.locations;
      last.transformations += cur.transformations;
      last.compiled += cur.compiled;
      last.neutral += cur.neutral;
      if (last.compiled > 0) {
        last.nvrDefined = true;
        last.nvr = computeNvr(last.neutral, last.compiled);
      }
      // quartiles need the merged sample: recompute from scratch
      std::vector<double> merged;
      for (const LocationSample& s : locs)
        if (s.tc >= last.tcMin && s.compiled > 0)
          merged.push_back(computeNvr(s.neutral, s.compiled));
      last.q1 = detail::quantile(merged, 0.25);
      last.median = detail::quantile(merged, 0.5);
      last.q3 = detail::quantile(merged, 0.75);
      bins.push_back(last);
    } else {
      close();
    }
  }
  return bins;
}

// per-location NVR samples of one transformation kind
inline std::vector<double> nvrSamplesOfKind(const CampaignReport& report, TransfoKind kind) {
  std::map<std::pair<std::string, std::string>, std::pair<long long, long long>> acc;
  for (const auto& r : report.records) {
    if (r.kind != kind || !r.applicable || !r.verdict || *r.verdict == Verdict::NonCompiling)
      continue;
    auto key = std::make_pair(r.programPath, r.locationId);
    acc[key].first += 1;
    if (*r.verdict == Verdict::Neutral) acc[key].second += 1;
  }
  std::vector<double> out;
  for (const auto& [_, c] : acc) out.push_back(computeNvr(c.second, c.first));
  return out;
}

struct PairwiseWilcoxon {
  std::string kindA, kindB;
  size_t nA = 0, nB = 0;
  WilcoxonResult result;
};

inline std::vector<PairwiseWilcoxon> pairwiseWilcoxon(const CampaignReport& report) {
  std::vector<std::pair<std::string, std::vector<double>>> samples;
  for (TransfoKind k : {TransfoKind::Add, TransfoKind::Delete, TransfoKind::Replace,
                        TransfoKind::Ami, TransfoKind::SwapSubtype, TransfoKind::LoopFlip}) {
    std::vector<double> s = nvrSamplesOfKind(report, k);
    if (!s.empty()) samples.emplace_back(transfoKindName(k), std::move(s));
  }
  std::vector<PairwiseWilcoxon> out;
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = i + 1; j < samples.size(); ++j) {
      PairwiseWilcoxon pw;
      pw.kindA = samples[i].first;
      pw.kindB = samples[j].first;
      pw.nA = samples[i].second.size();
      pw.nB = samples[j].second.size();
      pw.result = wilcoxonRankSum(samples[i].second, samples[j].second);
      out.push_back(std::move(pw));
    }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {
inline std::string csvEscape(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}
}  // namespace detail

inline std::string recordsToCsv(const CampaignReport& report) {
  std::string out =
      "attempt,program,kind,locationId,locationKind,coveringTests,applicable,"
      "notApplicableReason,verdict,failingTest,diverged,transplantSourceId,transplantKind,"
      "rewritingCount,methodRef,targetClass,interface\n";
  for (const auto& r : report.records) {
    out += std::to_string(r.attempt) + "," + detail::csvEscape(r.programPath) + "," +
           transfoKindName(r.kind) + "," + r.locationId + "," + r.locationKind + "," +
           std::to_string(r.coveringTestCount) + "," + (r.applicable ? "1" : "0") + "," +
           detail::csvEscape(r.notApplicableReason) + "," +
           (r.verdict ? verdictName(*r.verdict) : "") + "," +
           detail::csvEscape(r.failingTest) + "," + (r.diverged ? "1" : "0") + "," +
           r.transplantSourceId + "," + r.transplantKind + "," +
           std::to_string(r.rewritingCount) + "," + detail::csvEscape(r.methodRef) + "," +
           r.targetClass + "," + r.interfaceName + "\n";
  }
  return out;
}

inline std::string summaryCsv(const CampaignReport& report) {
  std::string out = "kind,attempted,notApplicable,nonCompiling,compiled,testFailing,neutral,"
                    "nvr,nvrPercent,ciLowPercent,ciHighPercent,halfWidthPercent\n";
  for (const auto& [kind, t] : report.tallies) {
    out += std::string(transfoKindName(kind)) + "," + std::to_string(t.attempted) + "," +
           std::to_string(t.notApplicable) + "," + std::to_string(t.nonCompiling) + "," +
           std::to_string(t.compiled) + "," + std::to_string(t.testFailing) + "," +
           std::to_string(t.neutral);
    if (t.compiled > 0) {
      double nvr = computeNvr(t.neutral, t.compiled);
      ConfidenceInterval ci =
          report.config.wilson ? wilsonCi(t.neutral, t.compiled, report.config.ciLevel)
                               : binomialCi(t.neutral, t.compiled, report.config.ciLevel);
      char buf[160];
      std::snprintf(buf, sizeof buf, ",%.6f,%s,%s,%s,%s", nvr,
                    formatPercent(nvr, 2).c_str(), formatPercent(ci.low, 2).c_str(),
                    formatPercent(ci.high, 2).c_str(), formatPercent(ci.halfWidth, 2).c_str());
      out += buf;
    } else {
      out += ",,,,,";
    }
    out += "\n";
  }
  return out;
}

inline std::string nodeTypeCsv(const CampaignReport& report) {
  std::string out = "kind,nodeKind,trials,neutral,included,omittedReason,nvrPercent,"
                    "halfWidthPercent\n";
  for (const auto& s : nvrByNodeType(report, report.config.minTrialsPerStratum)) {
    out += std::string(transfoKindName(s.kind)) + "," + s.nodeKind + "," +
           std::to_string(s.trials) + "," + std::to_string(s.neutral) + "," +
           (s.included ? "1" : "0") + "," + s.omittedReason;
    if (s.included)
      out += "," + formatPercent(s.nvr, 2) + "," + formatPercent(s.ci.halfWidth, 2);
    else
      out += ",,";
    out += "\n";
  }
  return out;
}

inline std::string coverageBinCsv(const CampaignReport& report) {
  std::string out =
      "bin,tcMin,tcMax,locations,transformations,compiled,neutral,nvrPercent,q1,median,q3\n";
  int i = 0;
  for (const auto& b : nvrByCoverageBin(report, report.config.binMinTransformations)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%lld,%lld,%lld,%lld,%s,%.4f,%.4f,%.4f\n", i++,
                  b.tcMin, b.tcMax, b.locations, b.transformations, b.compiled, b.neutral,
                  b.nvrDefined ? formatPercent(b.nvr, 2).c_str() : "", b.q1, b.median, b.q3);
    out += buf;
  }
  return out;
}

inline std::string wilcoxonCsv(const CampaignReport& report) {
  std::string out = "kindA,kindB,nA,nB,method,statistic,pValue\n";
  for (const auto& pw : pairwiseWilcoxon(report)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%s,%.4f,%.6g\n", pw.kindA.c_str(),
                  pw.kindB.c_str(), pw.nA, pw.nB, pw.result.method.c_str(),
                  pw.result.statistic, pw.result.pValue);
    out += buf;
  }
  return out;
}

}  // namespace nvgen

#endif  // NVGEN_REPORT_HPP
