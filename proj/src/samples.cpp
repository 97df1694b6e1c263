#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>

#include "depord/dist_core.hpp"

namespace depord {
namespace {

// Splits `idx` into `bins` groups by rank of key(i); equal keys share a group.
template <typename Key>
std::vector<std::vector<std::size_t>> rank_bins(std::vector<std::size_t> idx, int bins, Key key) {
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(bins));
  const auto s = idx.size();
  std::size_t prev_bin = 0;
  for (std::size_t r = 0; r < s; ++r) {
    std::size_t bin = r * static_cast<std::size_t>(bins) / s;
    if (r > 0 && key(idx[r]) == key(idx[r - 1])) bin = prev_bin;
    out[bin].push_back(idx[r]);
    prev_bin = bin;
  }
  std::erase_if(out, [](const auto& g) { return g.empty(); });
  return out;
}

std::vector<int> bins_per_dimension(int n_cells, std::size_t dims) {
  const double root = std::pow(static_cast<double>(n_cells), 1.0 / static_cast<double>(dims));
  const int base = std::max(1, static_cast<int>(std::floor(root + 1e-9)));
  std::vector<int> bins(dims, base);
  long long product = 1;
  for (int b : bins) product *= b;
  for (auto& b : bins) {
    if (product / b * (b + 1) <= n_cells) {
      product = product / b * (b + 1);
      ++b;
    }
  }
  return bins;
}

void split_cells(std::span<const SampleRow> rows, std::vector<std::size_t> group, std::size_t dim,
                 const std::vector<int>& bins, std::vector<std::vector<std::size_t>>& cells) {
  if (dim == bins.size()) {
    cells.push_back(std::move(group));
    return;
  }
  auto parts = rank_bins(std::move(group), bins[dim], [&](std::size_t i) { return rows[i].x[dim]; });
  for (auto& part : parts) split_cells(rows, std::move(part), dim + 1, bins, cells);
}

double parse_field(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "line " << line << ": missing or non-numeric field '" << field << "'";
    throw InputError(msg.str());
  }
  return value;
}

}  // namespace

ConditionalModel from_samples(std::span<const SampleRow> rows, const SampleOptions& opts) {
  if (rows.empty()) throw InputError("no samples");
  if (opts.n_cells < 1) throw InputError("n_cells must be positive");
  if (opts.max_atoms < 1) throw InputError("max_atoms must be positive");
  if (rows.size() < static_cast<std::size_t>(opts.n_cells)) throw InputError("fewer samples than cells");
  const auto dims = rows.front().x.size();
  if (dims == 0) throw InputError("samples need at least one x coordinate");
  for (const auto& r : rows)
    if (r.x.size() != dims) throw InputError("inconsistent x dimension across samples");

  const auto n = rows.size();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  // Y atoms: distinct values, or equal-count rank bins represented by their largest member.
  const auto y_groups = [&] {
    std::vector<std::size_t> sorted = all;
    std::stable_sort(sorted.begin(), sorted.end(), [&](auto a, auto b) { return rows[a].y < rows[b].y; });
    std::size_t distinct = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (r == 0 || rows[sorted[r]].y != rows[sorted[r - 1]].y) ++distinct;
    const int bins = distinct > static_cast<std::size_t>(opts.max_atoms) ? opts.max_atoms
                                                                        : static_cast<int>(distinct);
    if (distinct <= static_cast<std::size_t>(opts.max_atoms)) {
      std::vector<std::vector<std::size_t>> groups;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == 0 || rows[sorted[r]].y != rows[sorted[r - 1]].y) groups.emplace_back();
        groups.back().push_back(sorted[r]);
      }
      return groups;
    }
    return rank_bins(all, bins, [&](std::size_t i) { return rows[i].y; });
  }();

  std::vector<std::vector<std::size_t>> cells;
  split_cells(rows, all, 0, bins_per_dimension(opts.n_cells, dims), cells);

  std::vector<Eigen::Index> cell_of(n);
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (auto i : cells[c]) cell_of[i] = static_cast<Eigen::Index>(c);

  const auto m = static_cast<Eigen::Index>(y_groups.size());
  Eigen::VectorXd atoms(m);
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(cells.size()));
  const double unit = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& g = y_groups[static_cast<std::size_t>(j)];
    double top = rows[g.front()].y;
    for (auto i : g) {
      top = std::max(top, rows[i].y);
      joint(j, cell_of[i]) += unit;
    }
    atoms(j) = top;
  }
  joint /= joint.sum();
  return ConditionalModel::from_joint(atoms, joint);
}

std::vector<SampleRow> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV input");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 2) throw InputError("CSV needs a y column and at least one x column");

  std::vector<SampleRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(parse_field(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != columns) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << columns << " fields, got " << fields.size();
      throw InputError(msg.str());
    }
    rows.push_back({fields.front(), std::vector<double>(fields.begin() + 1, fields.end())});
  }
  if (rows.empty()) throw InputError("CSV has a header but no data rows");
  return rows;
}

}  // namespace depord
