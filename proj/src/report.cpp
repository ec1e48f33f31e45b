#include "samgsr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "samgsr/errors.hpp"
#include "samgsr/tsv.hpp"

namespace samgsr {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write file: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace

void write_screen(const std::vector<ScreenRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "set_name\tsize\tsamgs\tp\tq\n";
  for (const auto& row : rows)
    out << row.set_name << '\t' << row.size << '\t' << format_double(row.samgs)
        << '\t' << format_double(row.p) << '\t' << format_double(row.q) << '\n';
  finish(out, path);
}

void write_signature(const Signature& signature, const std::string& path) {
  auto out = open_out(path);
  out << "gene\ttime_label\td\tstage\n";
  for (const auto& e : signature.entries)
    out << e.gene << '\t' << e.time_label << '\t' << format_double(e.d) << '\t'
        << e.stage << '\n';
  finish(out, path);
}

Signature load_signature(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw io_error("empty signature file: " + path);
  auto header = split(lines[0], '\t');
  if (header.size() < 4 || header[0] != "gene" || header[1] != "time_label")
    throw io_error("not a signature file: " + path);
  Signature sig;
  std::map<std::string, int> time_index;  // stable index per label, file order
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].empty()) continue;
    auto fields = split(lines[r], '\t');
    if (fields.size() != 4)
      throw io_error("signature line " + std::to_string(r + 1) +
                     " needs 4 fields");
    SignatureEntry e;
    e.gene = fields[0];
    e.time_label = fields[1];
    e.d = parse_double(fields[2], "signature d, line " + std::to_string(r + 1));
    e.stage = fields[3];
    auto it =
        time_index.emplace(e.time_label, static_cast<int>(time_index.size())).first;
    e.time_index = it->second;
    sig.entries.push_back(std::move(e));
  }
  return sig;
}

void write_overlap(const std::vector<OverlapRow>& rows,
                   const std::vector<TimePoint>& times, const std::string& path) {
  auto out = open_out(path);
  out << "time_subset\tgenes\n";
  for (const auto& row : rows) {
    std::string subset;
    for (int t : row.times) {
      if (!subset.empty()) subset += ',';
      subset += times[t].label;
    }
    out << subset << '\t' << row.count << '\n';
  }
  finish(out, path);
}

void write_trace(const std::vector<NamedTrace>& traces, const std::string& path) {
  auto out = open_out(path);
  out << "unit\tlevel\tn_items\tchosen_k\trank\titem\tc_k\n";
  for (const auto& t : traces) {
    std::size_t n = t.trace.order.size();
    for (std::size_t r = 0; r < n; ++r) {
      out << t.unit << '\t' << t.level << '\t' << n << '\t'
          << t.trace.core_size << '\t' << r + 1 << '\t'
          << t.item_names[t.trace.order[r]] << '\t';
      if (r + 1 < n) out << format_double(t.trace.residual_p[r]);
      out << '\n';
    }
  }
  finish(out, path);
}

void write_metrics(const MetricsReport& report, const std::string& path) {
  // Columns ordered train-first, then test, times ascending within each.
  std::vector<const MetricsRow*> cols;
  for (const auto& row : report.rows)
    if (row.cohort == "train") cols.push_back(&row);
  for (const auto& row : report.rows)
    if (row.cohort == "test") cols.push_back(&row);
  std::stable_sort(cols.begin(), cols.end(),
                   [](const MetricsRow* a, const MetricsRow* b) {
                     if (a->cohort != b->cohort) return a->cohort > b->cohort;
                     return a->time_index < b->time_index;
                   });

  auto out = open_out(path);
  out << "metric";
  for (const auto* c : cols) out << '\t' << c->cohort << ':' << c->time_label;
  out << '\n';
  auto emit = [&](const std::string& name, auto value) {
    out << name;
    for (const auto* c : cols) {
      out << '\t';
      if (c->empty && name != "n_genes") out << "NA";
      else out << value(*c);
    }
    out << '\n';
  };
  emit("n_genes", [](const MetricsRow& r) { return std::to_string(r.n_features); });
  emit("error_pct", [](const MetricsRow& r) { return format_double(r.error * 100.0); });
  emit("gbs", [](const MetricsRow& r) { return format_double(r.gbs); });
  emit("bcm", [](const MetricsRow& r) { return format_double(r.bcm); });
  emit("aupr", [](const MetricsRow& r) { return format_double(r.aupr); });
  finish(out, path);
}

void write_selection_table(const SelectionFrequencyTable& table,
                           const std::string& path) {
  auto out = open_out(path);
  out << "row";
  for (const auto& label : table.time_labels) out << '\t' << label;
  out << "\tunique_avg\n";
  out << "avg_selected";
  for (double v : table.avg_selected_per_time) out << '\t' << format_double(v);
  out << '\t' << format_double(table.avg_unique_genes) << '\n';
  for (std::size_t i = 0; i < table.causal_genes.size(); ++i) {
    out << table.causal_genes[i] << "_pct";
    for (double v : table.causal_pct[i]) out << '\t' << format_double(v);
    out << "\t\n";
  }
  finish(out, path);
}

void write_subgroup_means(const std::vector<SubgroupMeanRow>& rows,
                          const std::string& path) {
  auto out = open_out(path);
  out << "gene,time_label,time_index,class,mean,n\n";
  for (const auto& row : rows)
    out << row.gene << ',' << row.time_label << ',' << row.time_index << ','
        << row.cls << ',' << format_double(row.mean) << ',' << row.n << '\n';
  finish(out, path);
}

namespace {

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Short tick label, trimmed of trailing zeros.
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string subgroup_svg(const std::vector<SubgroupMeanRow>& rows,
                         const std::string& gene) {
  struct Point {
    int t;
    double mean;
  };
  std::vector<Point> series[2];
  std::map<int, std::string> labels;
  for (const auto& row : rows) {
    if (row.gene != gene) throw data_error("row for a different gene: " + row.gene);
    series[row.cls == "case" ? 1 : 0].push_back({row.time_index, row.mean});
    labels[row.time_index] = row.time_label;
  }
  for (auto& s : series)
    std::sort(s.begin(), s.end(),
              [](const Point& a, const Point& b) { return a.t < b.t; });
  if (labels.empty()) throw data_error("no rows to plot for gene " + gene);

  double lo = rows[0].mean, hi = rows[0].mean;
  for (const auto& row : rows) {
    lo = std::min(lo, row.mean);
    hi = std::max(hi, row.mean);
  }
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double width = 640, height = 400;
  const double ml = 64, mr = 24, mt = 36, mb = 52;
  int t_lo = labels.begin()->first;
  int t_hi = labels.rbegin()->first;
  double t_span = t_hi > t_lo ? static_cast<double>(t_hi - t_lo) : 1.0;
  auto px = [&](int t) {
    return ml + (width - ml - mr) * (static_cast<double>(t - t_lo) / t_span);
  };
  auto py = [&](double v) {
    return height - mb - (height - mt - mb) * ((v - lo) / (hi - lo));
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + gene + "</text>\n";

  // axes
  svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt) + "\" x2=\"" +
         svg_num(ml) + "\" y2=\"" + svg_num(height - mb) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(height - mb) +
         "\" x2=\"" + svg_num(width - mr) + "\" y2=\"" + svg_num(height - mb) +
         "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    double v = lo + (hi - lo) * i / 4.0;
    double y = py(v);
    svg += "<line x1=\"" + svg_num(ml - 4) + "\" y1=\"" + svg_num(y) + "\" x2=\"" +
           svg_num(ml) + "\" y2=\"" + svg_num(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + svg_num(ml - 8) + "\" y=\"" + svg_num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(v) + "</text>\n";
  }
  for (const auto& [t, label] : labels) {
    double x = px(t);
    svg += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(height - mb) +
           "\" x2=\"" + svg_num(x) + "\" y2=\"" + svg_num(height - mb + 4) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(height - mb + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           label + "</text>\n";
  }
  svg += "<text x=\"" + svg_num((ml + width - mr) / 2) + "\" y=\"" +
         svg_num(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         "time</text>\n";
  svg += "<text x=\"16\" y=\"" + svg_num((mt + height - mb) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + svg_num((mt + height - mb) / 2) +
         ")\">mean expression</text>\n";

  const char* colors[2] = {"black", "red"};
  const char* names[2] = {"control", "case"};
  for (int cls = 0; cls < 2; ++cls) {
    if (series[cls].empty()) continue;
    std::string points;
    for (const auto& p : series[cls]) {
      if (!points.empty()) points += ' ';
      points += svg_num(px(p.t)) + "," + svg_num(py(p.mean));
    }
    svg += std::string("<polyline fill=\"none\" stroke=\"") + colors[cls] +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    for (const auto& p : series[cls])
      svg += std::string("<circle cx=\"") + svg_num(px(p.t)) + "\" cy=\"" +
             svg_num(py(p.mean)) + "\" r=\"3\" fill=\"" + colors[cls] + "\"/>\n";
  }
  for (int cls = 0; cls < 2; ++cls) {
    double y = mt + 10 + 16 * cls;
    svg += std::string("<line x1=\"") + svg_num(width - mr - 110) + "\" y1=\"" +
           svg_num(y) + "\" x2=\"" + svg_num(width - mr - 86) + "\" y2=\"" +
           svg_num(y) + "\" stroke=\"" + colors[cls] + "\" stroke-width=\"2\"/>\n";
    svg += std::string("<text x=\"") + svg_num(width - mr - 80) + "\" y=\"" +
           svg_num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + names[cls] +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace samgsr
