#include "adx/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace adx {

std::array<std::uint64_t, 10> synthetic_value_counts(std::uint64_t rows) {
  using u128 = unsigned __int128;
  std::array<u128, 10> weight{};
  u128 sum = 0;
  for (int i = 0; i < 10; ++i) {
    weight[i] = i == 0 ? 1 : weight[i - 1] * 10;
    sum += weight[i];
  }
  std::array<std::uint64_t, 10> counts{};
  std::array<u128, 10> remainder{};
  std::uint64_t assigned = 0;
  for (int i = 0; i < 10; ++i) {
    const u128 scaled = static_cast<u128>(rows) * weight[i];
    counts[i] = static_cast<std::uint64_t>(scaled / sum);
    remainder[i] = scaled % sum;
    assigned += counts[i];
  }
  std::array<int, 10> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (remainder[x] != remainder[y]) return remainder[x] > remainder[y];
    return x > y;
  });
  for (std::uint64_t k = 0; assigned < rows; ++k, ++assigned) ++counts[order[k % 10]];
  return counts;
}

Table gen_synthetic(std::uint64_t rows, std::uint64_t seed) {
  if (rows == 0) throw ConfigError("rows must be positive");
  std::vector<Attribute> attrs;
  for (char c = 'a'; c <= 'f'; ++c) attrs.push_back({std::string(1, c), AttributeType::int64()});
  Table table{Schema(attrs)};

  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> first;
  first.reserve(rows);
  const auto counts = synthetic_value_counts(rows);
  for (int i = 0; i < 10; ++i) first.insert(first.end(), counts[i], i + 1);
  std::shuffle(first.begin(), first.end(), rng);
  table.columns[0] = Column::from_int64(first);

  std::vector<std::int64_t> values(rows);
  for (std::size_t c = 1; c < 6; ++c) {
    for (auto& v : values) v = static_cast<std::int64_t>(rng() >> 33);
    table.columns[c] = Column::from_int64(values);
  }
  return table;
}

std::string search_word(std::uint32_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%05u", k % kSearchWords);
  return buf;
}

std::pair<std::string, std::string> search_word_range(double fraction, std::uint32_t first) {
  auto n = static_cast<std::uint32_t>(std::llround(fraction * kSearchWords));
  n = std::clamp<std::uint32_t>(n, 1, kSearchWords - first);
  return {search_word(first), search_word(first + n - 1)};
}

Table gen_uservisits(std::uint64_t rows, std::uint64_t seed) {
  if (rows == 0) throw ConfigError("rows must be positive");
  Table table{Schema({
      {"sourceIP", AttributeType::fixed_string(16)},
      {"destURL", AttributeType::fixed_string(100)},
      {"visitDate", AttributeType::int64()},
      {"adRevenue", AttributeType::float64()},
      {"userAgent", AttributeType::fixed_string(64)},
      {"countryCode", AttributeType::fixed_string(3)},
      {"languageCode", AttributeType::fixed_string(6)},
      {"searchWord", AttributeType::fixed_string(32)},
      {"duration", AttributeType::int64()},
  })};
  static const char* agents[] = {"Mozilla/5.0 (X11; Linux x86_64)", "Mozilla/5.0 (Windows NT 10.0; Win64; x64)",
                                 "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_15_7)", "Opera/9.80 (Windows NT 6.1)",
                                 "Lynx/2.8.9rel.1 libwww-FM/2.14"};
  static const char* countries[] = {"USA", "DEU", "FRA", "BRA", "IND", "CHN", "JPN", "GBR", "CAN", "AUS"};
  static const char* languages[] = {"en-US", "de-DE", "fr-FR", "pt-BR", "hi-IN", "zh-CN", "ja-JP", "en-GB"};

  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  std::vector<std::string> ip(rows), url(rows), agent(rows), country(rows), lang(rows), word(rows);
  std::vector<std::int64_t> date(rows), duration(rows);
  std::vector<double> revenue(rows);
  char buf[128];
  for (std::uint64_t r = 0; r < rows; ++r) {
    // Draws are sequenced explicitly; argument evaluation order is unspecified.
    unsigned octet[4];
    for (auto& o : octet) o = unsigned(pick(256));
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", octet[0], octet[1], octet[2], octet[3]);
    ip[r] = buf;
    const unsigned site = unsigned(pick(50000));
    const unsigned path = unsigned(rng());
    const unsigned page = unsigned(pick(10000));
    std::snprintf(buf, sizeof buf, "http://www.site%05u.example/%08x/page%04u.html", site, path, page);
    url[r] = buf;
    date[r] = 10957 + static_cast<std::int64_t>(pick(3653));  // days since 1970, 2000..2009
    revenue[r] = static_cast<double>(pick(100000)) / 100.0;
    agent[r] = agents[pick(std::size(agents))];
    country[r] = countries[pick(std::size(countries))];
    lang[r] = languages[pick(std::size(languages))];
    word[r] = search_word(static_cast<std::uint32_t>(pick(kSearchWords)));
    duration[r] = 1 + static_cast<std::int64_t>(pick(3600));
  }
  table.column("sourceIP") = Column::from_strings(16, ip);
  table.column("destURL") = Column::from_strings(100, url);
  table.column("visitDate") = Column::from_int64(date);
  table.column("adRevenue") = Column::from_float64(revenue);
  table.column("userAgent") = Column::from_strings(64, agent);
  table.column("countryCode") = Column::from_strings(3, country);
  table.column("languageCode") = Column::from_strings(6, lang);
  table.column("searchWord") = Column::from_strings(32, word);
  table.column("duration") = Column::from_int64(duration);
  return table;
}

}  // namespace adx
