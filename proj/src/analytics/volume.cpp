#include "agenda/analytics/volume.hpp"

namespace agenda::analytics {

VolumeSeries daily_volume(const std::vector<text::RawRecord>& records,
                          std::string_view corpus) {
  VolumeSeries series;
  for (const text::RawRecord& record : records) {
    if (record.corpus != corpus) continue;
    if (!record.timestamp || record.timestamp->size() < 10) {
      ++series.missing_timestamps;
      continue;
    }
    series.per_day[record.timestamp->substr(0, 10)] += 1;
  }
  return series;
}

}  // namespace agenda::analytics
