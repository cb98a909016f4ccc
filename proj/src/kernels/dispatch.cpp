// Copyright 2026 the pacore authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include "pacore/kernels/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "pacore/errors.hpp"

namespace pacore::kernels {

// defined in kernels_avx2.cpp; nullptr on non-x86 builds
const KernelTable* avx2_table_impl();

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const KernelTable* avx2_table() {
  if (!avx2_supported()) return nullptr;
  return avx2_table_impl();
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  return out;
}

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* table_by_name(const std::string& name) {
  for (const KernelTable* t : available_tables()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("PACORE_KERNEL_LANE")) {
    if (std::string(env) != "auto") {
      if (const KernelTable* t = table_by_name(env)) return t;
      throw ConfigError(std::string("unknown or unsupported kernel lane: ") +
                        env);
    }
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

}  // namespace

const KernelTable& active_table() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = pick_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void set_active_lane(const std::string& name) {
  const KernelTable* t = nullptr;
  if (name == "auto") {
    if (const KernelTable* a = avx2_table()) {
      t = a;
    } else {
      t = &scalar_table();
    }
  } else {
    t = table_by_name(name);
  }
  if (!t) throw ValidationError("unknown or unsupported kernel lane: " + name);
  g_active.store(t, std::memory_order_release);
}

}  // namespace pacore::kernels
