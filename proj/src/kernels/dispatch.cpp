#include <cstdio>
#include <cstdlib>
#include <string_view>

#include "ordcp/kernels.hpp"

namespace ordcp::kernels {
namespace {

const KernelTable& select_table() {
  const auto tables = available_tables();
  if (const char* forced = std::getenv("ORDCP_SIMD"); forced != nullptr && *forced != '\0') {
    for (const KernelTable* t : tables) {
      if (std::string_view(t->name) == forced) return *t;
    }
    std::fprintf(stderr, "WARNING: ORDCP_SIMD=%s not available, using %s\n", forced,
                 tables.back()->name);
  }
  return *tables.back();
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const KernelTable* t = detail::avx2_table()) tables.push_back(t);
  if (const KernelTable* t = detail::neon_table()) tables.push_back(t);
  return tables;
}

const KernelTable& active() {
  static const KernelTable& table = select_table();
  return table;
}

}  // namespace ordcp::kernels
