#ifndef GABP_TOOLS_OUTPUT_SET_HPP
#define GABP_TOOLS_OUTPUT_SET_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gabp_cli {

// Collects every output of a command in memory and publishes them together.
// Nothing appears in the target directory unless all files were written.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content);
  void commit();
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
  std::vector<std::string> contents_;
};

}  // namespace gabp_cli

#endif  // GABP_TOOLS_OUTPUT_SET_HPP
