#include "annealab_cli/output.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace annealab::cli {
namespace {

void dump(const nlohmann::json& v, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      std::vector<std::string> keys;
      for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
      std::sort(keys.begin(), keys.end());
      for (std::size_t k = 0; k < keys.size(); ++k) {
        if (k) out += ',';
        newline(depth + 1);
        out += nlohmann::json(keys[k]).dump();
        out += indent > 0 ? ": " : ":";
        dump(v.at(keys[k]), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_number(); });
      out += '[';
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += flat ? ", " : ",";
        if (!flat) newline(depth + 1);
        dump(v[k], indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? fmt::format("{:.17g}", d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& value, int indent) {
  std::string out;
  dump(value, indent, 0, out);
  out += '\n';
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  std::string hex;
  for (unsigned int k = 0; k < length; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

std::string DatTable::render() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "# ";
  for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "\t" : "") + columns[k];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += fmt::format("{}{:.17g}", k ? "\t" : "", row[k]);
    out += "\n";
  }
  return out;
}

OutputDirectory::OutputDirectory(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw std::runtime_error(fmt::format("{}: {}", root_.string(), ec.message()));
}

void OutputDirectory::write(const std::string& name, const std::string& contents) {
  const auto path = root_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("{}: {}", path.string(), std::strerror(errno)));
  out << contents;
  out.close();
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
  names_.push_back(name);
  hashes_.push_back(sha256_hex(contents));
  sizes_.push_back(contents.size());
}

void OutputDirectory::write_json(const std::string& name, const nlohmann::json& value) {
  write(name, dump_json(value));
}

void OutputDirectory::write_plot(const std::string& name, const DatTable& table,
                                 const std::string& gnuplot_body) {
  write(name + ".dat", table.render());
  std::string script = "# gnuplot script for " + name + ".dat\n";
  script += "set terminal pngcairo size 800,600\n";
  script += "set output '" + name + ".png'\n";
  script += gnuplot_body;
  if (script.back() != '\n') script += '\n';
  write(name + ".gp", script);
}

void OutputDirectory::write_manifest(const std::string& kind) {
  std::vector<std::size_t> order(names_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return names_[a] < names_[b]; });
  nlohmann::json files = nlohmann::json::array();
  for (auto k : order)
    files.push_back({{"path", names_[k]}, {"bytes", sizes_[k]}, {"sha256", hashes_[k]}});
  const nlohmann::json manifest{{"kind", kind}, {"files", files}};
  const auto text = dump_json(manifest);
  const auto path = root_ / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("{}: {}", path.string(), std::strerror(errno)));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

}  // namespace annealab::cli
