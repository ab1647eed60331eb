#ifndef HMJP_IO_HPP
#define HMJP_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hmjp/mcmc.hpp"

namespace hmjp {

// Chain CSV: manifest comments, then
//   iteration,gamma0,lambda0,gamma1,lambda1,accept0,accept1,trunc0,trunc1
// with doubles printed to full round-trip precision.
void write_chain_csv(const ChainOutput &chain, std::ostream &out,
                     const std::string &manifest);
void write_chain_csv_file(const ChainOutput &chain, const std::string &path,
                          const std::string &manifest);

// Reads the columns back; family/seed/burn-in are recovered from manifest
// comments when present (keys model=, seed=, iterations=, burnin=, thin=).
ChainOutput read_chain_csv(std::istream &in);
ChainOutput read_chain_csv_file(const std::string &path);

// Summary CSV: manifest comments (plus the quantile rule), then
//   parameter,median,lo95,hi95
void write_summary_csv(const std::vector<ParameterSummary> &summary,
                       std::ostream &out, const std::string &manifest);
void write_summary_csv_file(const std::vector<ParameterSummary> &summary,
                            const std::string &path, const std::string &manifest);

// Density-grid CSV: parameter,value,density rows per non-degenerate
// parameter; degenerate (zero-variance) parameters are listed in the header
// comments and in `degenerate` when provided.
void write_density_csv(const ChainOutput &chain, int grid_points,
                       std::ostream &out, const std::string &manifest,
                       std::vector<std::string> *degenerate = nullptr);
void write_density_csv_file(const ChainOutput &chain, int grid_points,
                            const std::string &path, const std::string &manifest,
                            std::vector<std::string> *degenerate = nullptr);

std::string format_full_precision(double v);

} // namespace hmjp

#endif
