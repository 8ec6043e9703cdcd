#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "agenda/text/records.hpp"

namespace agenda::text {
struct RawRecord;
}

namespace agenda::analytics {

struct VolumeSeries {
  // calendar date (YYYY-MM-DD) -> raw message count
  std::map<std::string, std::size_t> per_day;
  std::size_t missing_timestamps = 0;
};

// Raw (unpreprocessed) records per calendar day for one corpus. Timestamps
// with a time component are truncated to the date; records without one are
// excluded and counted.
VolumeSeries daily_volume(const std::vector<text::RawRecord>& records,
                          std::string_view corpus);

}  // namespace agenda::analytics
