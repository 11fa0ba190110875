#include <cstdlib>
#include <string>

#include "scrid/error.hpp"
#include "scrid/kernels.hpp"

namespace scrid::kernels {

std::string_view name(KernelChoice choice) {
  switch (choice) {
    case KernelChoice::Auto: return "auto";
    case KernelChoice::Scalar: return "scalar";
    case KernelChoice::Avx2: return "avx2";
  }
  return "auto";
}

KernelChoice parse_choice(std::string_view text) {
  if (text == "auto") return KernelChoice::Auto;
  if (text == "scalar") return KernelChoice::Scalar;
  if (text == "avx2") return KernelChoice::Avx2;
  throw Error(ErrorKind::InvalidArgument, "unknown kernel '" + std::string(text) + "'");
}

KernelChoice resolved(KernelChoice choice) {
  if (choice != KernelChoice::Auto) return choice;
  if (const char* env = std::getenv("SCRID_KERNEL"); env != nullptr && *env != '\0') {
    const KernelChoice forced = parse_choice(env);
    if (forced != KernelChoice::Auto) return forced;
  }
  return avx2_available() ? KernelChoice::Avx2 : KernelChoice::Scalar;
}

HazardRowFn select(KernelChoice choice) {
  switch (resolved(choice)) {
    case KernelChoice::Avx2:
      if (!avx2_available())
        throw Error(ErrorKind::InvalidArgument, "avx2 kernel requested but CPU lacks AVX2/FMA");
      return hazard_row_avx2;
    case KernelChoice::Scalar:
    case KernelChoice::Auto:
      break;
  }
  return hazard_row_scalar;
}

}  // namespace scrid::kernels
