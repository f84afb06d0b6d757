#include "neuroloop/events/event_io.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace neuroloop {

namespace {

EventFileFormat resolve_format(const std::string& path, EventFileFormat format) {
  if (format != EventFileFormat::by_extension) return format;
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".bin" || ext == ".dat") return EventFileFormat::binary;
  return EventFileFormat::csv;
}

void check_event(const DvsEvent& e, const SensorGeometry& g, const std::string& where) {
  if (e.x >= g.width || e.y >= g.height) {
    throw ParseError(where + ": pixel (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                     ") outside " + std::to_string(g.width) + "x" + std::to_string(g.height));
  }
  if (e.t_us < 0) throw ParseError(where + ": negative timestamp");
}

std::vector<DvsEvent> load_csv(const std::string& path, SensorGeometry geometry) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<DvsEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("t_us", 0) == 0) continue;  // header
    const std::string where = path + " line " + std::to_string(line_no);
    std::istringstream ls(line);
    std::string field;
    std::array<long long, 4> values{};
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ls, field, ',')) throw ParseError(where + ": expected 4 fields");
      try {
        values[i] = std::stoll(field);
      } catch (const std::exception&) {
        throw ParseError(where + ": bad field '" + field + "'");
      }
    }
    if (values[3] != 0 && values[3] != 1) throw ParseError(where + ": polarity must be 0 or 1");
    DvsEvent e{values[0], static_cast<std::uint16_t>(values[1]),
               static_cast<std::uint16_t>(values[2]), values[3] == 1};
    if (values[1] < 0 || values[2] < 0) throw ParseError(where + ": negative coordinate");
    check_event(e, geometry, where);
    events.push_back(e);
  }
  return events;
}

std::vector<DvsEvent> load_binary(const std::string& path, SensorGeometry geometry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<DvsEvent> events;
  std::array<unsigned char, 7> rec{};
  std::size_t record_no = 0;
  while (in.read(reinterpret_cast<char*>(rec.data()), rec.size())) {
    ++record_no;
    const std::uint32_t t = static_cast<std::uint32_t>(rec[0]) |
                            (static_cast<std::uint32_t>(rec[1]) << 8) |
                            (static_cast<std::uint32_t>(rec[2]) << 16) |
                            (static_cast<std::uint32_t>(rec[3]) << 24);
    DvsEvent e{static_cast<std::int64_t>(t), rec[4], rec[5], (rec[6] & 1) != 0};
    check_event(e, geometry, path + " record " + std::to_string(record_no));
    events.push_back(e);
  }
  if (in.gcount() != 0) {
    throw ParseError(path + ": truncated record at offset " + std::to_string(record_no * rec.size()));
  }
  return events;
}

}  // namespace

std::vector<DvsEvent> load_events(const std::string& path, EventFileFormat format,
                                  EventOrderPolicy order, SensorGeometry geometry) {
  auto events = resolve_format(path, format) == EventFileFormat::binary
                    ? load_binary(path, geometry)
                    : load_csv(path, geometry);
  const bool sorted =
      std::is_sorted(events.begin(), events.end(),
                     [](const DvsEvent& a, const DvsEvent& b) { return a.t_us < b.t_us; });
  if (!sorted) {
    if (order == EventOrderPolicy::reject) {
      throw ParseError(path + ": timestamps are not non-decreasing");
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const DvsEvent& a, const DvsEvent& b) { return a.t_us < b.t_us; });
  }
  return events;
}

void save_events(const std::string& path, const std::vector<DvsEvent>& events,
                 EventFileFormat format) {
  if (resolve_format(path, format) == EventFileFormat::binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    for (const auto& e : events) {
      if (e.t_us < 0 || e.t_us > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError("timestamp " + std::to_string(e.t_us) + " does not fit the binary format");
      }
      if (e.x > 255 || e.y > 255) {
        throw ParseError("coordinates above 255 do not fit the binary format");
      }
      const auto t = static_cast<std::uint32_t>(e.t_us);
      const std::array<unsigned char, 7> rec{
          static_cast<unsigned char>(t & 0xff),         static_cast<unsigned char>((t >> 8) & 0xff),
          static_cast<unsigned char>((t >> 16) & 0xff), static_cast<unsigned char>((t >> 24) & 0xff),
          static_cast<unsigned char>(e.x),              static_cast<unsigned char>(e.y),
          static_cast<unsigned char>(e.polarity ? 1 : 0)};
      out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
    }
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "t_us,x,y,polarity\n";
  for (const auto& e : events) {
    out << e.t_us << ',' << e.x << ',' << e.y << ',' << (e.polarity ? 1 : 0) << '\n';
  }
}

}  // namespace neuroloop
