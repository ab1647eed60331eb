#include "hmjp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hmjp/stats.hpp"

namespace hmjp {

std::string format_full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void emit_manifest(std::ostream &out, const std::string &manifest) {
  std::istringstream lines(manifest);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) out << "# " << line << "\n";
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

const std::vector<double> &draw_values(const ChainOutput &chain, int p,
                                       std::vector<double> &buf) {
  buf.clear();
  buf.reserve(chain.draws.size());
  for (const auto &rec : chain.draws)
    buf.push_back(p == 0   ? rec.theta.shape0
                  : p == 1 ? rec.theta.rate0
                  : p == 2 ? rec.theta.shape1
                           : rec.theta.rate1);
  return buf;
}

constexpr const char *kParamNames[4] = {"gamma0", "lambda0", "gamma1", "lambda1"};

} // namespace

void write_chain_csv(const ChainOutput &chain, std::ostream &out,
                     const std::string &manifest) {
  emit_manifest(out, manifest);
  out << "iteration,gamma0,lambda0,gamma1,lambda1,accept0,accept1,trunc0,trunc1\n";
  for (const auto &rec : chain.draws) {
    out << rec.iteration << ',' << format_full_precision(rec.theta.shape0) << ','
        << format_full_precision(rec.theta.rate0) << ','
        << format_full_precision(rec.theta.shape1) << ','
        << format_full_precision(rec.theta.rate1) << ',' << rec.accept0 << ','
        << rec.accept1 << ',' << format_full_precision(rec.trunc0) << ','
        << format_full_precision(rec.trunc1) << "\n";
  }
}

void write_chain_csv_file(const ChainOutput &chain, const std::string &path,
                          const std::string &manifest) {
  auto out = open_out(path);
  write_chain_csv(chain, out, manifest);
}

ChainOutput read_chain_csv(std::istream &in) {
  ChainOutput chain;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto begin = line.find_first_not_of("# \t\r");
      if (begin == std::string::npos) continue;
      const std::string body = line.substr(begin);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      try {
        if (key == "model") chain.family = family_from_name(value);
        else if (key == "seed") chain.seed = std::stoull(value);
        else if (key == "iterations") chain.iterations = std::stol(value);
        else if (key == "burnin") chain.burn_in = std::stol(value);
        else if (key == "thin") chain.thin = std::stol(value);
      } catch (const std::exception &) {
        // unknown or malformed manifest values are ignored
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("iteration,gamma0,lambda0,gamma1,lambda1", 0) != 0)
        throw PanelFormatError(line_no, "unexpected chain CSV header");
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 9)
      throw PanelFormatError(line_no, "expected 9 fields, got " +
                                          std::to_string(fields.size()));
    try {
      ChainRecord rec;
      rec.iteration = std::stol(fields[0]);
      rec.theta.shape0 = std::stod(fields[1]);
      rec.theta.rate0 = std::stod(fields[2]);
      rec.theta.shape1 = std::stod(fields[3]);
      rec.theta.rate1 = std::stod(fields[4]);
      rec.accept0 = std::stoi(fields[5]);
      rec.accept1 = std::stoi(fields[6]);
      rec.trunc0 = std::stod(fields[7]);
      rec.trunc1 = std::stod(fields[8]);
      chain.draws.push_back(rec);
    } catch (const PanelFormatError &) {
      throw;
    } catch (const std::exception &) {
      throw PanelFormatError(line_no, "malformed chain row");
    }
  }
  if (!header_seen)
    throw PanelFormatError(line_no == 0 ? 1 : line_no, "missing chain CSV header");
  if (chain.iterations == 0) chain.iterations = static_cast<long>(chain.draws.size());
  return chain;
}

ChainOutput read_chain_csv_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return read_chain_csv(in);
}

void write_summary_csv(const std::vector<ParameterSummary> &summary,
                       std::ostream &out, const std::string &manifest) {
  emit_manifest(out, manifest);
  out << "# quantiles=linear interpolation between order statistics (type 7); "
         "levels 0.5, 0.025, 0.975\n";
  out << "parameter,median,lo95,hi95\n";
  for (const auto &row : summary)
    out << row.name << ',' << format_full_precision(row.median) << ','
        << format_full_precision(row.lo95) << ','
        << format_full_precision(row.hi95) << "\n";
}

void write_summary_csv_file(const std::vector<ParameterSummary> &summary,
                            const std::string &path, const std::string &manifest) {
  auto out = open_out(path);
  write_summary_csv(summary, out, manifest);
}

void write_density_csv(const ChainOutput &chain, int grid_points,
                       std::ostream &out, const std::string &manifest,
                       std::vector<std::string> *degenerate) {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
  if (chain.draws.empty())
    throw std::invalid_argument("density grid of an empty chain");
  std::vector<std::string> degenerate_local;
  std::vector<double> buf;
  std::vector<DensityGrid> grids(4);
  std::vector<bool> ok(4, false);
  for (int p = 0; p < 4; ++p) {
    ok[p] = kde_grid(draw_values(chain, p, buf), grid_points, grids[p]);
    if (!ok[p]) degenerate_local.push_back(kParamNames[p]);
  }
  emit_manifest(out, manifest);
  for (const auto &name : degenerate_local)
    out << "# degenerate=" << name << " (zero variance, no density grid)\n";
  out << "parameter,value,density\n";
  for (int p = 0; p < 4; ++p) {
    if (!ok[p]) continue;
    for (std::size_t g = 0; g < grids[p].x.size(); ++g)
      out << kParamNames[p] << ',' << format_full_precision(grids[p].x[g]) << ','
          << format_full_precision(grids[p].density[g]) << "\n";
  }
  if (degenerate) *degenerate = std::move(degenerate_local);
}

void write_density_csv_file(const ChainOutput &chain, int grid_points,
                            const std::string &path, const std::string &manifest,
                            std::vector<std::string> *degenerate) {
  auto out = open_out(path);
  write_density_csv(chain, grid_points, out, manifest, degenerate);
}

} // namespace hmjp
