#ifndef NVGEN_DIFF_HPP
#define NVGEN_DIFF_HPP

#include <algorithm>
#include <string>
#include <vector>

namespace nvgen {

namespace detail {

inline std::vector<std::string> splitLines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

// Unified diff (3 lines of context) via LCS; good enough for variant files.
inline std::string unifiedDiff(const std::string& oldText, const std::string& newText,
                               const std::string& oldName = "a", const std::string& newName = "b") {
  std::vector<std::string> a = detail::splitLines(oldText);
  std::vector<std::string> b = detail::splitLines(newText);
  size_t n = a.size(), m = b.size();

  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);

  struct Op {
    char tag;          // ' ', '-', '+'
    size_t apos, bpos;  // positions before this op is consumed
  };
  std::vector<Op> ops;
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      ops.push_back({' ', i, j});
      ++i;
      ++j;
    } else if (j >= m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1])) {
      ops.push_back({'-', i, j});
      ++i;
    } else {
      ops.push_back({'+', i, j});
      ++j;
    }
  }

  const size_t ctx = 3;
  std::string out = "--- " + oldName + "\n+++ " + newName + "\n";
  size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].tag == ' ') {
      ++k;
      continue;
    }
    size_t start = k >= ctx ? k - ctx : 0;
    size_t lastChange = k;
    size_t scan = k;
    while (scan < ops.size() && scan - lastChange <= 2 * ctx) {
      if (ops[scan].tag != ' ') lastChange = scan;
      ++scan;
    }
    size_t end = std::min(ops.size(), lastChange + ctx + 1);

    size_t aCount = 0, bCount = 0;
    for (size_t t = start; t < end; ++t) {
      if (ops[t].tag != '+') ++aCount;
      if (ops[t].tag != '-') ++bCount;
    }
    out += "@@ -" + std::to_string(ops[start].apos + 1) + "," + std::to_string(aCount) + " +" +
           std::to_string(ops[start].bpos + 1) + "," + std::to_string(bCount) + " @@\n";
    for (size_t t = start; t < end; ++t) {
      const Op& op = ops[t];
      out += op.tag;
      out += op.tag == '+' ? b[op.bpos] : a[op.apos];
      out += '\n';
    }
    k = end;
  }
  return out;
}

}  // namespace nvgen

#endif  // NVGEN_DIFF_HPP
