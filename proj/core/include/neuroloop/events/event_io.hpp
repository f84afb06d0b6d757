#pragma once

#include <string>
#include <vector>

#include "neuroloop/events/dvs.hpp"

namespace neuroloop {

enum class EventOrderPolicy {
  reject,       // non-monotonic timestamps raise ParseError
  stable_sort,  // events are stably sorted by timestamp after loading
};

enum class EventFileFormat {
  csv,     // t_us,x,y,polarity with a header row
  binary,  // packed 7-byte records: u32 t_us, u8 x, u8 y, u8 flags (bit0 = polarity)
  by_extension,
};

std::vector<DvsEvent> load_events(const std::string& path,
                                  EventFileFormat format = EventFileFormat::by_extension,
                                  EventOrderPolicy order = EventOrderPolicy::reject,
                                  SensorGeometry geometry = {});

void save_events(const std::string& path, const std::vector<DvsEvent>& events,
                 EventFileFormat format = EventFileFormat::by_extension);

}  // namespace neuroloop
