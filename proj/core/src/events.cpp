#include "chronnet/events.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"

namespace chronnet {

EventSet::EventSet(std::vector<Event> events) : events_(std::move(events)) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    if (!std::isfinite(e.t) || !std::isfinite(e.x) || !std::isfinite(e.y)) {
      throw Error("event " + std::to_string(i) + " has a non-finite field");
    }
    if (i > 0 && e.t < events_[i - 1].t) sorted_ = false;
  }
}

double EventSet::time_span() const {
  if (events_.size() < 2) return 0.0;
  auto [lo, hi] = std::minmax_element(events_.begin(), events_.end(),
                                      [](const Event& a, const Event& b) { return a.t < b.t; });
  return hi->t - lo->t;
}

std::size_t EventSet::distinct_timestamps() const {
  std::set<double> ts;
  for (const auto& e : events_) ts.insert(e.t);
  return ts.size();
}

bool EventSet::has_parallel_events() const { return distinct_timestamps() != events_.size(); }

EventFormat parse_event_format(const std::string& name) {
  if (name == "generic-csv" || name == "generic") return EventFormat::GenericCsv;
  if (name == "mcd14ml-csv" || name == "mcd14ml") return EventFormat::Mcd14mlCsv;
  throw Error("unknown event format '" + name + "' (expected generic-csv or mcd14ml-csv)");
}

long long parse_civil_day(const std::string& date) {
  std::string digits;
  for (char ch : date) {
    if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
    } else if (ch != '-' && ch != '/') {
      throw Error("bad date '" + date + "'");
    }
  }
  if (digits.size() != 8) throw Error("bad date '" + date + "'");
  const int y = std::stoi(digits.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(digits.substr(4, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(digits.substr(6, 2)));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw Error("bad date '" + date + "'");
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

namespace {

int find_column(const std::vector<std::string>& header, std::initializer_list<const char*> names) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    for (const char* n : names) {
      if (header[i] == n) return static_cast<int>(i);
    }
  }
  return -1;
}

EventSet parse_generic(std::istream& in, const std::string& source) {
  std::string line;
  if (!csv::read_line(in, line)) return EventSet{};
  auto header = csv::split_line(line);
  if (header.size() < 3 || header[0] != "t" || header[1] != "x" || header[2] != "y") {
    throw ParseError(source, 1, "generic CSV header must start with t,x,y");
  }
  {
    std::set<std::string> keys(header.begin(), header.end());
    if (keys.size() != header.size()) throw ParseError(source, 1, "duplicate column names");
  }
  std::vector<Event> events;
  std::size_t lineno = 1;
  while (csv::read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    Event e;
    if (!csv::parse_double(fields[0], e.t)) throw ParseError(source, lineno, "non-numeric t");
    if (!csv::parse_double(fields[1], e.x)) throw ParseError(source, lineno, "non-numeric x");
    if (!csv::parse_double(fields[2], e.y)) throw ParseError(source, lineno, "non-numeric y");
    for (std::size_t c = 3; c < fields.size(); ++c) {
      if (!fields[c].empty()) e.attrs.emplace(header[c], fields[c]);
    }
    events.push_back(std::move(e));
  }
  return EventSet(std::move(events));
}

EventSet parse_mcd14ml(std::istream& in, const FilterSpec& filters, const std::string& source) {
  std::string line;
  if (!csv::read_line(in, line)) return EventSet{};
  const auto header = csv::split_line(line);
  const int c_date = find_column(header, {"acq_date", "YYYYMMDD", "date"});
  const int c_time = find_column(header, {"acq_time", "HHMM", "time"});
  const int c_lat = find_column(header, {"latitude", "lat"});
  const int c_lon = find_column(header, {"longitude", "lon"});
  const int c_conf = find_column(header, {"confidence", "conf"});
  const int c_type = find_column(header, {"type"});
  if (c_date < 0 || c_lat < 0 || c_lon < 0 || c_conf < 0) {
    throw ParseError(source, 1,
                     "MCD14ML header needs acq_date, latitude, longitude and confidence columns");
  }
  if (filters.granularity == TimeGranularity::Minute && c_time < 0) {
    throw ParseError(source, 1, "minute granularity needs an acq_time column");
  }

  std::vector<Event> events;
  std::size_t lineno = 1;
  while (csv::read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    if (f.size() != header.size()) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(f.size()));
    }
    Event e;
    if (!csv::parse_double(f[c_lon], e.x)) throw ParseError(source, lineno, "non-numeric longitude");
    if (!csv::parse_double(f[c_lat], e.y)) throw ParseError(source, lineno, "non-numeric latitude");
    double conf = 0;
    if (!csv::parse_double(f[c_conf], conf)) throw ParseError(source, lineno, "non-numeric confidence");
    if (!(conf > filters.min_confidence)) continue;
    if (c_type >= 0 && !filters.keep_types.empty() &&
        std::find(filters.keep_types.begin(), filters.keep_types.end(), f[c_type]) ==
            filters.keep_types.end()) {
      continue;
    }

    long long day = 0;
    try {
      day = parse_civil_day(f[c_date]);
    } catch (const Error& err) {
      throw ParseError(source, lineno, err.what());
    }
    if (filters.granularity == TimeGranularity::Day) {
      e.t = static_cast<double>(day);
    } else {
      long long hhmm = 0;
      if (!csv::parse_int64(f[c_time], hhmm) || hhmm < 0 || hhmm % 100 >= 60 || hhmm / 100 >= 24) {
        throw ParseError(source, lineno, "bad acq_time '" + f[c_time] + "'");
      }
      e.t = static_cast<double>(day * 1440 + (hhmm / 100) * 60 + hhmm % 100);
    }
    e.attrs.emplace("confidence", f[c_conf]);
    if (c_type >= 0) e.attrs.emplace("type", f[c_type]);
    events.push_back(std::move(e));
  }
  return EventSet(std::move(events));
}

}  // namespace

EventSet parse_events(std::istream& in, EventFormat format, const FilterSpec& filters,
                      const std::string& source) {
  switch (format) {
    case EventFormat::GenericCsv:
      return parse_generic(in, source);
    case EventFormat::Mcd14mlCsv:
      return parse_mcd14ml(in, filters, source);
  }
  throw Error("unknown event format");
}

EventSet load_events(const std::filesystem::path& path, EventFormat format,
                     const FilterSpec& filters) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open event file '" + path.string() + "'");
  return parse_events(in, format, filters, path.string());
}

void write_events(const EventSet& es, std::ostream& out) {
  std::set<std::string> keys;
  for (const auto& e : es.events()) {
    for (const auto& [k, v] : e.attrs) keys.insert(k);
  }
  out << "t,x,y";
  for (const auto& k : keys) out << ',' << csv::quote_if_needed(k);
  out << '\n';
  for (const auto& e : es.events()) {
    out << csv::format_double(e.t) << ',' << csv::format_double(e.x) << ','
        << csv::format_double(e.y);
    for (const auto& k : keys) {
      out << ',';
      if (auto it = e.attrs.find(k); it != e.attrs.end()) out << csv::quote_if_needed(it->second);
    }
    out << '\n';
  }
}

void write_events(const EventSet& es, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write event file '" + path.string() + "'");
  write_events(es, out);
}

EventSet sort_events(EventSet es) {
  if (es.sorted()) return es;
  std::vector<Event> v = es.events();
  std::stable_sort(v.begin(), v.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  return EventSet(std::move(v));
}

std::vector<TimeGroup> group_parallel(const EventSet& es) {
  if (!es.sorted()) throw Error("group_parallel requires a time-sorted EventSet");
  std::vector<TimeGroup> groups;
  const auto& ev = es.events();
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i + 1;
    while (j < ev.size() && ev[j].t == ev[i].t) ++j;
    groups.push_back({ev[i].t, i, j - i});
    i = j;
  }
  return groups;
}

}  // namespace chronnet
