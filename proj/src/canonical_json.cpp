#include "tablescope/canonical_json.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "tablescope/error.hpp"

namespace tablescope {
namespace {

void dump_into(const json& value, std::string& out) {
  switch (value.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      // nlohmann's default object_t is std::map, already ordered by key bytes.
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        dump_into(item, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ',';
        first = false;
        dump_into(item, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_number(value.get<double>());
      break;
    default:
      out += value.dump();
  }
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("non-finite number has no JSON representation");
  }
  if (x == 0.0) return "0";
  constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53
  if (std::trunc(x) == x && std::fabs(x) < kExactIntegerLimit) {
    return std::to_string(static_cast<long long>(x));
  }
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

std::string canonical_dump(const json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

json parse_json(std::string_view raw, std::string_view what) {
  try {
    return json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

}  // namespace tablescope
