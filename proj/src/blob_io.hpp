// Internal helper: versioned hybrid container with a JSON metadata header
// followed by named little-endian float64 blocks.
#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbbound/errors.hpp"

namespace rb::detail {

using Json = nlohmann::json;

class BlobWriter {
 public:
  Json meta;

  void add(const std::string& name, const Eigen::MatrixXd& m) {
    names_.push_back(name);
    blocks_.push_back(m);
  }
  void add(const std::string& name, const Eigen::VectorXd& v) {
    add(name, Eigen::MatrixXd(v));
  }

  void write(const std::string& path, const std::string& magic) {
    Json arrays = Json::array();
    for (size_t i = 0; i < names_.size(); ++i)
      arrays.push_back({{"name", names_[i]},
                        {"rows", blocks_[i].rows()},
                        {"cols", blocks_[i].cols()}});
    meta["arrays"] = arrays;
    const std::string header = meta.dump();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
    const std::uint64_t len = header.size();
    os.write(reinterpret_cast<const char*>(&len), sizeof(len));
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const Eigen::MatrixXd& m : blocks_)
      os.write(reinterpret_cast<const char*>(m.data()),
               static_cast<std::streamsize>(sizeof(double) *
                                            static_cast<size_t>(m.size())));
    if (!os) throw ConfigError("write failed: " + path);
  }

 private:
  std::vector<std::string> names_;
  std::vector<Eigen::MatrixXd> blocks_;
};

class BlobReader {
 public:
  Json meta;

  BlobReader(const std::string& path, const std::string& magic) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open: " + path);
    std::string tag(magic.size(), '\0');
    is.read(tag.data(), static_cast<std::streamsize>(tag.size()));
    if (!is || tag != magic)
      throw ConfigError("bad file format (magic mismatch): " + path);
    std::uint64_t len = 0;
    is.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string header(len, '\0');
    is.read(header.data(), static_cast<std::streamsize>(len));
    if (!is) throw ConfigError("truncated file: " + path);
    meta = Json::parse(header);
    for (const auto& a : meta.at("arrays")) {
      Eigen::MatrixXd m(a.at("rows").get<Eigen::Index>(),
                        a.at("cols").get<Eigen::Index>());
      is.read(reinterpret_cast<char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) *
                                           static_cast<size_t>(m.size())));
      if (!is) throw ConfigError("truncated array block: " + path);
      arrays_[a.at("name").get<std::string>()] = std::move(m);
    }
  }

  const Eigen::MatrixXd& matrix(const std::string& name) const {
    auto it = arrays_.find(name);
    if (it == arrays_.end())
      throw ConfigError("missing array in artifact: " + name);
    return it->second;
  }
  Eigen::VectorXd vector(const std::string& name) const {
    const Eigen::MatrixXd& m = matrix(name);
    if (m.cols() != 1 && m.size() != 0)
      throw ConfigError("array is not a vector: " + name);
    return Eigen::VectorXd(m.reshaped());
  }

 private:
  std::map<std::string, Eigen::MatrixXd> arrays_;
};

}  // namespace rb::detail
