#pragma once

#include <compare>
#include <memory>
#include <utility>

namespace ccpslice {

// Immutable shared indirection that compares by value; lets recursive
// variants keep value semantics.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT(implicit)

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T& get() const { return *ptr_; }

  bool operator==(const Box& other) const { return ptr_ == other.ptr_ || *ptr_ == *other.ptr_; }
  std::strong_ordering operator<=>(const Box& other) const {
    if (ptr_ == other.ptr_) return std::strong_ordering::equal;
    return *ptr_ <=> *other.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

}  // namespace ccpslice
