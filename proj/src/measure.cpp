#include <ostream>

#include "json.hpp"
#include "optheap/harness.hpp"

namespace optheap::harness {

namespace {
std::uint64_t bucket_of(std::size_t n) {
  if (n == 0) return 0;
  std::uint64_t b = 1;
  while (b * 2 <= n) b *= 2;
  return b;
}
}  // namespace

void MeasureTable::add(const char* op, std::size_t n, std::uint64_t cmp,
                       std::uint64_t fixes, std::uint64_t edits) {
  Cell& c = cells_[{op, bucket_of(n)}];
  ++c.count;
  c.sum_cmp += cmp;
  if (cmp > c.max_cmp) c.max_cmp = cmp;
  if (fixes > c.max_fixes) c.max_fixes = fixes;
  if (edits > c.max_edits) c.max_edits = edits;
}

std::vector<MeasureRow> MeasureTable::rows() const {
  std::vector<MeasureRow> out;
  for (const auto& [key, c] : cells_) {
    MeasureRow r;
    r.op = key.first;
    r.n_bucket = key.second;
    r.count = c.count;
    r.max_comparisons = c.max_cmp;
    r.mean_comparisons = c.count ? double(c.sum_cmp) / double(c.count) : 0.0;
    r.max_fixes = c.max_fixes;
    r.max_edits = c.max_edits;
    out.push_back(r);
  }
  return out;
}

std::uint64_t MeasureTable::max_comparisons(const std::string& op) const {
  std::uint64_t m = 0;
  for (const auto& [key, c] : cells_)
    if (key.first == op && c.max_cmp > m) m = c.max_cmp;
  return m;
}

std::uint64_t MeasureTable::max_edits(const std::string& op) const {
  std::uint64_t m = 0;
  for (const auto& [key, c] : cells_)
    if (key.first == op && c.max_edits > m) m = c.max_edits;
  return m;
}

void MeasureTable::to_json(std::ostream& os, const QueueConfig& cfg) const {
  nlohmann::json j;
  j["config"] = {{"extension_rate", cfg.extension_rate},
                 {"transfer_steps", cfg.transfer_steps},
                 {"reclaim_budget", cfg.reclaim_budget}};
  j["rows"] = nlohmann::json::array();
  for (const MeasureRow& r : rows()) {
    j["rows"].push_back({{"op", r.op},
                         {"n_bucket", r.n_bucket},
                         {"count", r.count},
                         {"max_comparisons", r.max_comparisons},
                         {"mean_comparisons", r.mean_comparisons},
                         {"max_fixes", r.max_fixes},
                         {"max_edits", r.max_edits}});
  }
  os << j.dump(2) << '\n';
}

void MeasureTable::to_csv(std::ostream& os) const {
  os << "op,n_bucket,count,max_comparisons,mean_comparisons,max_fixes,max_edits\n";
  for (const MeasureRow& r : rows())
    os << r.op << ',' << r.n_bucket << ',' << r.count << ',' << r.max_comparisons << ','
       << r.mean_comparisons << ',' << r.max_fixes << ',' << r.max_edits << '\n';
}

}  // namespace optheap::harness
