#pragma once

// Tensor files, CSV reports, run configurations and plot scripts.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tgi/solvers.hpp"
#include "tgi/tensor.hpp"

namespace tgi::io {

/// Tensor document: {"row_modes": [...], "col_modes": [...], "entries": [[re, im], ...]}.
std::string tensor_to_text(const DenseTensor& d);
DenseTensor tensor_from_text(const std::string& text, const std::string& source = "<memory>");

DenseTensor read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const std::filesystem::path& path, const DenseTensor& d);

inline constexpr const char* kReportHeader = "problem,order,index,nnz,kind,residual,mean_time_s,repeats,seed";

void write_report_csv(std::ostream& out, const std::vector<ResidualReport>& reports, bool header = true);
void write_report_csv(const std::filesystem::path& path, const std::vector<ResidualReport>& reports);

struct RunConfig {
    std::string command;
    std::string problem;
    std::vector<std::string> kinds;
    std::map<std::string, double> tolerances;
    int repeats = 30;
    std::string out_dir = ".";
    std::uint64_t seed = 0;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string config_to_text(const RunConfig& cfg);
RunConfig config_from_text(const std::string& text);

/// Solution over an (n, m) grid written as CSV rows of real parts, one grid row per line.
void write_grid_csv(const std::filesystem::path& path, const DenseTensor& grid);

/// Plain matplotlib script drawing one surface per grid CSV file.
void write_plot_script(const std::filesystem::path& path, const std::vector<std::filesystem::path>& grids,
                       const std::vector<std::string>& titles);

}  // namespace tgi::io
