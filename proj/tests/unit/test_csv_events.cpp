#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"
#include "chronnet/events.hpp"
#include "chronnet/random.hpp"

using namespace chronnet;

namespace {

EventSet parse(const std::string& text, EventFormat fmt = EventFormat::GenericCsv, const FilterSpec& f = {}) {
  std::istringstream in(text);
  return parse_events(in, fmt, f);
}

EventSet at_times(std::initializer_list<double> ts, std::initializer_list<const char*> tags = {}) {
  std::vector<Event> ev;
  auto tag = tags.begin();
  for (double t : ts) {
    Event e{t, 0, 0, {}};
    if (tag != tags.end()) e.attrs["id"] = *tag++;
    ev.push_back(e);
  }
  return EventSet(std::move(ev));
}

std::string ids(const EventSet& es) {
  std::string s;
  for (const auto& e : es.events()) s += e.attrs.at("id");
  return s;
}

}  // namespace

TEST(Csv, SplitsQuotedFields) {
  EXPECT_EQ(csv::split_line(R"(a,"b,c","d""e",)"), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  EXPECT_EQ(csv::quote_if_needed("x,y"), "\"x,y\"");
  EXPECT_EQ(csv::quote_if_needed("plain"), "plain");
}

TEST(Csv, StrictNumbers) {
  double d = 0;
  EXPECT_TRUE(csv::parse_double(" 1.5 ", d));
  EXPECT_EQ(d, 1.5);
  EXPECT_FALSE(csv::parse_double("1.5x", d));
  EXPECT_FALSE(csv::parse_double("", d));
  long long i = 0;
  EXPECT_TRUE(csv::parse_int64("0130", i));
  EXPECT_EQ(i, 130);
  EXPECT_FALSE(csv::parse_int64("1.0", i));
}

TEST(Csv, FormatDoubleRoundTrips) {
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const double v = (rng.uniform01() - 0.5) * std::pow(10.0, static_cast<int>(rng.below(20)) - 10);
    double back = 0;
    ASSERT_TRUE(csv::parse_double(csv::format_double(v), back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(csv::format_double(3), "3");
}

TEST(Events, GenericThreeRows) {
  const auto es = parse("t,x,y\n1,0.5,0.5\n2,1.5,0.5\n3,0.5,0.5\n");
  ASSERT_EQ(es.size(), 3u);
  EXPECT_TRUE(es.sorted());
  EXPECT_EQ(es[1].x, 1.5);
  EXPECT_EQ(es.time_span(), 2.0);
  EXPECT_EQ(es.distinct_timestamps(), 3u);
  EXPECT_FALSE(es.has_parallel_events());
}

TEST(Events, HeaderOnlyIsEmpty) {
  const auto es = parse("t,x,y\n");
  EXPECT_TRUE(es.empty());
  EXPECT_TRUE(es.sorted());
  EXPECT_EQ(es.time_span(), 0.0);
}

TEST(Events, ExtraColumnsBecomeAttrs) {
  const auto es = parse("t,x,y,type,note\n1,0,0,2,\"a,b\"\n");
  ASSERT_EQ(es.size(), 1u);
  EXPECT_EQ(es[0].attrs.at("type"), "2");
  EXPECT_EQ(es[0].attrs.at("note"), "a,b");
}

TEST(Events, UnsortedInputIsFlagged) {
  EXPECT_FALSE(parse("t,x,y\n2,0,0\n1,0,0\n").sorted());
}

TEST(Events, ErrorsNameTheLine) {
  try {
    parse("t,x,y\n1,0,0\n2,abc,0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse("t,x,y\n1,0,0\n\n4,0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse("x,y,t\n"), ParseError);
  EXPECT_THROW(parse("t,x,y\ninf,0,0\n"), Error);
  EXPECT_THROW(parse_event_format("geojson"), Error);
  EXPECT_THROW(load_events("/nonexistent/events.csv", EventFormat::GenericCsv), Error);
}

TEST(Events, FormatNames) {
  EXPECT_EQ(parse_event_format("generic-csv"), EventFormat::GenericCsv);
  EXPECT_EQ(parse_event_format("mcd14ml-csv"), EventFormat::Mcd14mlCsv);
}

TEST(Events, CivilDays) {
  // reference values from Python's datetime.date arithmetic
  EXPECT_EQ(parse_civil_day("1970-01-01"), 0);
  EXPECT_EQ(parse_civil_day("2000-01-01"), 10957);
  EXPECT_EQ(parse_civil_day("2020-02-29"), 18321);
  EXPECT_EQ(parse_civil_day("1969-12-31"), -1);
  EXPECT_EQ(parse_civil_day("20190901"), 18140);
  EXPECT_EQ(parse_civil_day("2021-03-01"), 18687);
  EXPECT_THROW(parse_civil_day("2021-02-29"), Error);
  EXPECT_THROW(parse_civil_day("2021-1-1"), Error);
}

TEST(Events, Mcd14mlConfidenceFilter) {
  const std::string text =
      "latitude,longitude,brightness,acq_date,acq_time,confidence,type\n"
      "-10.5,-50.25,310,2019-09-01,0130,80,0\n"
      "-10.6,-50.35,305,2019-09-01,0130,60,0\n"
      "-10.7,-50.45,320,2019-09-02,1745,90,2\n";
  const auto es = parse(text, EventFormat::Mcd14mlCsv);
  ASSERT_EQ(es.size(), 2u);
  EXPECT_EQ(es[0].x, -50.25);
  EXPECT_EQ(es[0].y, -10.5);
  EXPECT_EQ(es[0].t, 18140);
  EXPECT_EQ(es[1].t, 18141);
  EXPECT_EQ(es[1].attrs.at("type"), "2");
  EXPECT_EQ(es[1].attrs.at("confidence"), "90");

  FilterSpec minute;
  minute.granularity = TimeGranularity::Minute;
  const auto fine = parse(text, EventFormat::Mcd14mlCsv, minute);
  EXPECT_EQ(fine[0].t, 18140.0 * 1440 + 90);
  EXPECT_EQ(fine[1].t, 18141.0 * 1440 + 17 * 60 + 45);

  FilterSpec strict;
  strict.min_confidence = 80;
  EXPECT_EQ(parse(text, EventFormat::Mcd14mlCsv, strict).size(), 1u);

  FilterSpec types;
  types.keep_types = {"0"};
  EXPECT_EQ(parse(text, EventFormat::Mcd14mlCsv, types).size(), 1u);
}

TEST(Events, Mcd14mlErrors) {
  EXPECT_THROW(parse("latitude,longitude\n", EventFormat::Mcd14mlCsv), ParseError);
  try {
    parse("latitude,longitude,acq_date,confidence\n1,2,2019-09-01,80\n1,2,2019-13-01,80\n",
          EventFormat::Mcd14mlCsv);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Events, SortExamples) {
  const auto s = sort_events(at_times({3, 1, 2}));
  EXPECT_TRUE(s.sorted());
  EXPECT_EQ(s[0].t, 1);
  EXPECT_EQ(s[2].t, 3);

  const auto already = at_times({1, 2, 2, 5}, {"a", "b", "c", "d"});
  EXPECT_EQ(sort_events(already), already);

  EXPECT_EQ(ids(sort_events(at_times({2, 2, 1}, {"A", "B", "C"}))), "CAB");
}

TEST(Events, SortIsStablePermutation) {
  Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<Event> ev;
    const auto n = rng.below(60);
    for (std::uint64_t i = 0; i < n; ++i) {
      ev.push_back({static_cast<double>(rng.below(8)), 0, 0, {{"i", std::to_string(i)}}});
    }
    const auto s = sort_events(EventSet(ev));
    ASSERT_EQ(s.size(), ev.size());
    for (std::size_t i = 1; i < s.size(); ++i) {
      ASSERT_LE(s[i - 1].t, s[i].t);
      if (s[i - 1].t == s[i].t) ASSERT_LT(std::stoi(s[i - 1].attrs.at("i")), std::stoi(s[i].attrs.at("i")));
    }
  }
}

TEST(Events, GroupParallelExamples) {
  const auto g = group_parallel(at_times({1, 1, 2}));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], (TimeGroup{1, 0, 2}));
  EXPECT_EQ(g[1], (TimeGroup{2, 2, 1}));

  EXPECT_EQ(group_parallel(at_times({1, 2, 3})).size(), 3u);
  const auto same = group_parallel(at_times({5, 5, 5}));
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same[0].count, 3u);

  EXPECT_TRUE(group_parallel(EventSet{}).empty());
  EXPECT_THROW(group_parallel(at_times({2, 1})), Error);
}

TEST(Events, GroupsCoverEveryEvent) {
  Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    std::vector<Event> ev;
    for (std::uint64_t i = 0, n = rng.below(100); i < n; ++i) ev.push_back({double(rng.below(20)), 0, 0, {}});
    const auto es = sort_events(EventSet(ev));
    std::size_t next = 0;
    for (const auto& grp : group_parallel(es)) {
      ASSERT_EQ(grp.first, next);
      for (std::size_t i = grp.first; i < grp.first + grp.count; ++i) ASSERT_EQ(es[i].t, grp.t);
      next += grp.count;
    }
    EXPECT_EQ(next, es.size());
  }
}

TEST(Events, WriteLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "chronnet_events_rt";
  std::filesystem::create_directories(dir);
  Rng rng(9);
  std::vector<Event> ev;
  for (int i = 0; i < 200; ++i) {
    Event e{static_cast<double>(i / 3), rng.uniform01() * 100 - 50, rng.normal(), {}};
    if (i % 2) e.attrs["kind"] = "odd, quoted";
    if (i % 5 == 0) e.attrs["period"] = std::to_string(i % 4);
    ev.push_back(e);
  }
  const EventSet es(ev);
  write_events(es, dir / "e.csv");
  EXPECT_EQ(load_events(dir / "e.csv", EventFormat::GenericCsv), es);
  std::filesystem::remove_all(dir);
}
