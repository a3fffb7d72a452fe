#include "tripnet/numerics/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace tripnet::kernels {

#if defined(TRIPNET_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table_unchecked() noexcept;
}
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(TRIPNET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept {
    if (const char* env = std::getenv("TRIPNET_KERNELS"); env != nullptr) {
        if (std::string_view(env) == "scalar") {
            return &scalar_table();
        }
    }
    if (const KernelTable* t = avx2_table(); t != nullptr) {
        return t;
    }
    return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(TRIPNET_HAVE_AVX2)
    if (cpu_has_avx2()) {
        return &detail::avx2_table_unchecked();
    }
#endif
    return nullptr;
}

bool supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
            return avx2_table() != nullptr;
    }
    return false;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
    const KernelTable* t = isa == Isa::Avx2 ? avx2_table() : &scalar_table();
    if (t == nullptr) {
        return false;
    }
    current().store(t, std::memory_order_release);
    return true;
}

}  // namespace tripnet::kernels
