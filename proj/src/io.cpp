#include "tgi/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tgi/errors.hpp"

namespace tgi::io {

using nlohmann::json;

namespace {

std::vector<Index> read_modes(const json& doc, const char* field, const std::string& source) {
    if (!doc.contains(field)) throw ParseError(source + ": missing field '" + field + "'");
    const auto& arr = doc.at(field);
    if (!arr.is_array()) throw ParseError(source + ": field '" + field + "' must be a list of integers");
    std::vector<Index> modes;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<long long>() < 1) {
            throw ParseError(source + ": field '" + field + "' item " + std::to_string(i) +
                             " is not a positive integer");
        }
        modes.push_back(static_cast<Index>(arr[i].get<long long>()));
    }
    return modes;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace

std::string tensor_to_text(const DenseTensor& d) {
    json doc;
    doc["row_modes"] = d.shape().row_modes();
    doc["col_modes"] = d.shape().col_modes();
    json entries = json::array();
    for (const Complex& z : d.entries()) entries.push_back({z.real(), z.imag()});
    doc["entries"] = std::move(entries);
    return doc.dump() + "\n";
}

DenseTensor tensor_from_text(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(source + ": tensor document must be an object");
    const auto rows = read_modes(doc, "row_modes", source);
    const auto cols = read_modes(doc, "col_modes", source);
    if (rows.empty() && cols.empty()) throw ParseError(source + ": tensor needs at least one mode");
    const TensorShape shape(rows, cols);
    if (!doc.contains("entries") || !doc.at("entries").is_array()) {
        throw ParseError(source + ": missing list field 'entries'");
    }
    const auto& arr = doc.at("entries");
    if (static_cast<Index>(arr.size()) != shape.size()) {
        throw ParseError(source + ": field 'entries' has " + std::to_string(arr.size()) + " items, shape " +
                         shape.to_string() + " needs " + std::to_string(shape.size()));
    }
    std::vector<Complex> values;
    values.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& e = arr[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw ParseError(source + ": field 'entries' item " + std::to_string(i) + " is not a [re, im] pair");
        }
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return DenseTensor(shape, std::span<const Complex>(values));
}

DenseTensor read_tensor_file(const std::filesystem::path& path) { return tensor_from_text(slurp(path), path.string()); }

void write_tensor_file(const std::filesystem::path& path, const DenseTensor& d) { spill(path, tensor_to_text(d)); }

void write_report_csv(std::ostream& out, const std::vector<ResidualReport>& reports, bool header) {
    if (header) out << kReportHeader << '\n';
    out << std::setprecision(6) << std::scientific;
    for (const auto& rep : reports) {
        for (const auto& row : rep.rows) {
            out << rep.problem << ',' << rep.order << ',' << rep.index << ',' << rep.nnz << ',' << to_string(row.kind)
                << ',' << row.residual << ',' << row.mean_time_s() << ',' << rep.repeats << ',' << rep.seed << '\n';
        }
    }
}

void write_report_csv(const std::filesystem::path& path, const std::vector<ResidualReport>& reports) {
    std::ostringstream ss;
    write_report_csv(ss, reports);
    spill(path, ss.str());
}

std::string config_to_text(const RunConfig& cfg) {
    json doc;
    doc["command"] = cfg.command;
    doc["problem"] = cfg.problem;
    doc["kinds"] = cfg.kinds;
    doc["tolerances"] = cfg.tolerances;
    doc["repeats"] = cfg.repeats;
    doc["out_dir"] = cfg.out_dir;
    doc["seed"] = cfg.seed;
    return doc.dump(2) + "\n";
}

RunConfig config_from_text(const std::string& text) {
    try {
        const json doc = json::parse(text);
        RunConfig cfg;
        cfg.command = doc.at("command").get<std::string>();
        cfg.problem = doc.at("problem").get<std::string>();
        cfg.kinds = doc.at("kinds").get<std::vector<std::string>>();
        cfg.tolerances = doc.at("tolerances").get<std::map<std::string, double>>();
        cfg.repeats = doc.at("repeats").get<int>();
        cfg.out_dir = doc.at("out_dir").get<std::string>();
        cfg.seed = doc.at("seed").get<std::uint64_t>();
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("run config: ") + e.what());
    }
}

void write_grid_csv(const std::filesystem::path& path, const DenseTensor& grid) {
    const auto& rows = grid.shape().row_modes();
    if (rows.size() != 2 || grid.shape().col_count() != 1) {
        throw ShapeMismatch("grid output needs a tensor over (n, m) with no column extent, got " +
                            grid.shape().to_string());
    }
    std::ostringstream ss;
    ss << std::setprecision(17);
    for (Index i = 0; i < rows[0]; ++i) {
        for (Index j = 0; j < rows[1]; ++j) {
            if (j) ss << ',';
            ss << grid.entries()[static_cast<std::size_t>(i * rows[1] + j)].real();
        }
        ss << '\n';
    }
    spill(path, ss.str());
}

void write_plot_script(const std::filesystem::path& path, const std::vector<std::filesystem::path>& grids,
                       const std::vector<std::string>& titles) {
    if (grids.size() != titles.size()) throw PreconditionViolated("one title per grid is required");
    std::ostringstream ss;
    ss << "import numpy as np\n"
          "import matplotlib\n"
          "matplotlib.use(\"Agg\")\n"
          "import matplotlib.pyplot as plt\n\n"
          "grids = [\n";
    for (std::size_t i = 0; i < grids.size(); ++i) {
        ss << "    (" << std::quoted(grids[i].filename().string()) << ", " << std::quoted(titles[i]) << "),\n";
    }
    ss << "]\n\n"
          "fig = plt.figure(figsize=(4 * len(grids), 4))\n"
          "for pos, (name, title) in enumerate(grids, start=1):\n"
          "    z = np.loadtxt(name, delimiter=\",\")\n"
          "    x, y = np.meshgrid(np.arange(z.shape[1]), np.arange(z.shape[0]))\n"
          "    ax = fig.add_subplot(1, len(grids), pos, projection=\"3d\")\n"
          "    ax.plot_surface(x, y, z, cmap=\"viridis\")\n"
          "    ax.set_title(title)\n"
          "fig.tight_layout()\n"
          "fig.savefig(\"solutions.png\", dpi=120)\n";
    spill(path, ss.str());
}

}  // namespace tgi::io
