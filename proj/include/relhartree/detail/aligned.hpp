#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <vector>

namespace relhartree {

// 64-byte aligned allocator so field buffers satisfy FFTW/SIMD alignment.
template <class T>
struct AlignedAllocator {
    using value_type = T;

    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        std::size_t bytes = n * sizeof(T);
        bytes = (bytes + 63u) & ~std::size_t(63u);
        void* p = std::aligned_alloc(64, bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
    template <class U>
    bool operator!=(const AlignedAllocator<U>&) const { return false; }
};

using complexd = std::complex<double>;
using cvector = std::vector<complexd, AlignedAllocator<complexd>>;
using dvector = std::vector<double, AlignedAllocator<double>>;

}  // namespace relhartree
