#include "stabex/instances.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "stabex/freemod.hpp"
#include "stabex/pairs.hpp"

namespace stabex {

namespace {

[[noreturn]] void fail(const std::string& desc, const std::string& what, size_t pos) {
  throw std::invalid_argument("descriptor \"" + desc + "\": " + what + " at position " +
                              std::to_string(pos));
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

uint64_t parse_number(const std::string& desc, size_t pos) {
  if (pos >= desc.size()) fail(desc, "expected a number", pos);
  uint64_t v = 0;
  for (size_t i = pos; i < desc.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(desc[i])))
      fail(desc, "expected a digit", i);
    v = v * 10 + (desc[i] - '0');
    if (v > 1'000'000) fail(desc, "number too large", pos);
  }
  return v;
}

}  // namespace

const Category& instance_from_descriptor(const std::string& desc) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Category>> registry;

  size_t colon = desc.find(':');
  if (colon == std::string::npos) fail(desc, "expected ':'", desc.size());
  std::string kind = desc.substr(0, colon);
  if (kind != "zmod" && kind != "pairs") fail(desc, "unknown instance kind \"" + kind + "\"", 0);
  uint64_t arg = parse_number(desc, colon + 1);
  if (kind == "zmod" && arg < 2) fail(desc, "modulus must be at least 2", colon + 1);
  if (kind == "pairs" && !is_prime(arg)) fail(desc, "expected a prime", colon + 1);

  std::string key = kind + ":" + std::to_string(arg);
  std::lock_guard<std::mutex> lk(mu);
  auto it = registry.find(key);
  if (it == registry.end()) {
    std::unique_ptr<Category> made;
    if (kind == "zmod") {
      made = std::make_unique<FreeModCategory>(static_cast<uint32_t>(arg));
    } else {
      made = std::make_unique<PairCategory>(static_cast<uint32_t>(arg));
    }
    it = registry.emplace(key, std::move(made)).first;
  }
  return *it->second;
}

}  // namespace stabex
