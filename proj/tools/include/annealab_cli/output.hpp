#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace annealab::cli {

// JSON text with every floating value printed to 17 significant digits and
// keys in lexicographic order. Non-finite numbers become null.
std::string dump_json(const nlohmann::json& value, int indent = 2);

std::string sha256_hex(const std::string& bytes);

// Tab-separated plot data: '#' header lines (free text, then column names
// with units), one row per line.
struct DatTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;  // e.g. "tau [1]", "residual [prob]"
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

// Collects everything an experiment writes so the manifest can list it.
// Files are written immediately; errors surface as std::runtime_error with
// the OS message.
class OutputDirectory {
 public:
  explicit OutputDirectory(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void write(const std::string& name, const std::string& contents);
  void write_json(const std::string& name, const nlohmann::json& value);
  // name.dat plus name.gp; the script stub plots the .dat using gnuplot_body.
  void write_plot(const std::string& name, const DatTable& table, const std::string& gnuplot_body);

  // manifest.json: kind, plus path, bytes and SHA-256 of every file above.
  void write_manifest(const std::string& kind);
  const std::vector<std::string>& files() const { return names_; }

 private:
  std::filesystem::path root_;
  std::vector<std::string> names_;
  std::vector<std::string> hashes_;
  std::vector<std::size_t> sizes_;
};

}  // namespace annealab::cli
