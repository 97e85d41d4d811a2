#include "output_set.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>

namespace gabp_cli {

namespace fs = std::filesystem;

void OutputSet::add(const std::string& name, std::string content) {
  for (const auto& n : names_) {
    if (n == name) throw std::logic_error("duplicate output " + name);
  }
  names_.push_back(name);
  contents_.push_back(std::move(content));
}

void OutputSet::commit() {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("output: cannot create directory " + dir_.string() + ": " + ec.message());

  std::vector<fs::path> staged;
  auto discard = [&staged] {
    std::error_code ignored;
    for (const auto& p : staged) fs::remove(p, ignored);
  };
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const fs::path tmp = dir_ / (names_[i] + ".tmp");
    staged.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents_[i].data(), static_cast<std::streamsize>(contents_[i].size()));
    out.close();
    if (!out) {
      discard();
      throw std::runtime_error("output: cannot write " + (dir_ / names_[i]).string());
    }
  }

  std::vector<fs::path> published;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const fs::path target = dir_ / names_[i];
    fs::rename(staged[i], target, ec);
    if (ec) {
      std::error_code ignored;
      for (const auto& p : published) fs::remove(p, ignored);
      discard();
      throw std::runtime_error("output: cannot publish " + target.string() + ": " + ec.message());
    }
    published.push_back(target);
  }
}

}  // namespace gabp_cli
