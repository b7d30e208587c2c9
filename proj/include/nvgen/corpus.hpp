#ifndef NVGEN_CORPUS_HPP
#define NVGEN_CORPUS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvgen/campaign.hpp"

namespace nvgen {

struct ManifestEntry {
  std::string path;  // file name relative to the corpus directory
  int classCount = 0;
  int statementCount = 0;
  int testCount = 0;
  int coveredStatements = 0;
  double statementCoverage = 0;
};

struct CorpusManifest {
  std::vector<ManifestEntry> programs;

  static CorpusManifest fromJson(const ordered_json& j) {
    CorpusManifest m;
    for (const auto& e : j.at("programs")) {
      ManifestEntry me;
      me.path = e.at("path").get<std::string>();
      me.classCount = e.at("classes").get<int>();
      me.statementCount = e.at("statements").get<int>();
      me.testCount = e.at("tests").get<int>();
      me.coveredStatements = e.at("coveredStatements").get<int>();
      me.statementCoverage = e.at("statementCoverage").get<double>();
      m.programs.push_back(std::move(me));
    }
    return m;
  }

  ordered_json toJson() const {
    ordered_json j;
    ordered_json arr = ordered_json::array();
    for (const auto& e : programs) {
      ordered_json je;
      je["path"] = e.path;
      je["classes"] = e.classCount;
      je["statements"] = e.statementCount;
      je["tests"] = e.testCount;
      je["coveredStatements"] = e.coveredStatements;
      je["statementCoverage"] = e.statementCoverage;
      arr.push_back(je);
    }
    j["programs"] = arr;
    return j;
  }
};

inline std::vector<std::string> listCorpusFiles(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mini")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

struct CorpusCheckLine {
  std::string path;
  bool ok = false;
  std::string message;
};

// Sanity gate plus exact manifest comparison: every program typechecks, its
// suite passes, and the recomputed counters equal the manifest entries.
inline std::vector<CorpusCheckLine> checkCorpus(const std::string& dir, RunLimits limits) {
  namespace fs = std::filesystem;
  std::vector<CorpusCheckLine> out;

  fs::path manifestPath = fs::path(dir) / "manifest.json";
  CorpusManifest manifest;
  bool haveManifest = fs::exists(manifestPath);
  if (haveManifest) {
    std::ifstream in(manifestPath);
    std::stringstream ss;
    ss << in.rdbuf();
    manifest = CorpusManifest::fromJson(ordered_json::parse(ss.str()));
  } else {
    out.push_back({manifestPath.string(), false, "manifest.json missing"});
  }

  for (const std::string& file : listCorpusFiles(dir)) {
    CorpusCheckLine line;
    std::string name = fs::path(file).filename().string();
    line.path = name;
    try {
      std::ifstream in(file);
      std::stringstream ss;
      ss << in.rdbuf();
      CorpusEntry entry = loadCorpusEntry(file, ss.str(), limits);
      const ManifestEntry* me = nullptr;
      for (const auto& m : manifest.programs)
        if (m.path == name) me = &m;
      if (!me) {
        line.message = "sanity ok, but missing from manifest.json";
      } else {
        double cov = entry.statementCount == 0
                         ? 0.0
                         : static_cast<double>(entry.coveredCount) / entry.statementCount;
        bool match = me->classCount == entry.classCount &&
                     me->statementCount == entry.statementCount &&
                     me->testCount == entry.testCount &&
                     me->coveredStatements == entry.coveredCount &&
                     me->statementCoverage == cov;
        if (match) {
          line.ok = true;
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "ok (classes=%d statements=%d tests=%d coverage=%.4f)",
                        entry.classCount, entry.statementCount, entry.testCount, cov);
          line.message = buf;
        } else {
          char buf[240];
          std::snprintf(buf, sizeof buf,
                        "manifest mismatch: recomputed classes=%d statements=%d tests=%d "
                        "covered=%d vs manifest classes=%d statements=%d tests=%d covered=%d",
                        entry.classCount, entry.statementCount, entry.testCount,
                        entry.coveredCount, me->classCount, me->statementCount, me->testCount,
                        me->coveredStatements);
          line.message = buf;
        }
      }
    } catch (const std::exception& e) {
      line.message = e.what();
    }
    out.push_back(std::move(line));
  }
  return out;
}

inline CorpusManifest buildManifest(const std::string& dir, RunLimits limits) {
  namespace fs = std::filesystem;
  CorpusManifest manifest;
  for (const std::string& file : listCorpusFiles(dir)) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    CorpusEntry entry = loadCorpusEntry(file, ss.str(), limits);
    ManifestEntry me;
    me.path = fs::path(file).filename().string();
    me.classCount = entry.classCount;
    me.statementCount = entry.statementCount;
    me.testCount = entry.testCount;
    me.coveredStatements = entry.coveredCount;
    me.statementCoverage = entry.statementCount == 0
                               ? 0.0
                               : static_cast<double>(entry.coveredCount) / entry.statementCount;
    manifest.programs.push_back(std::move(me));
  }
  return manifest;
}

}  // namespace nvgen

#endif  // NVGEN_CORPUS_HPP
