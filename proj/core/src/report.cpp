#include "swad/report.hpp"

#include <algorithm>

namespace swad {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::SWAD: return "swad";
    case Method::SSWAD: return "sswad";
    case Method::FEAD: return "fead";
  }
  return "unknown";
}

std::size_t OutlierReport::outlier_count() const noexcept {
  return static_cast<std::size_t>(std::count(is_outlier.begin(), is_outlier.end(), true));
}

std::vector<std::size_t> OutlierReport::outlier_rows() const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < is_outlier.size(); ++i) {
    if (is_outlier[i]) rows.push_back(i);
  }
  return rows;
}

}  // namespace swad
