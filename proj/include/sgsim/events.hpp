#pragma once

#include <cstdint>
#include <optional>

#include "sgsim/scenario.hpp"

namespace sgsim {

enum class EmsEventKind {
  Beep,
  Disconnect,
  Reconnect,
  TariffChange,
  BatteryLowInhibit,
  SyncLock,
  SyncLoss,
  ProtectionLockout,
};

const char* to_string(EmsEventKind kind);

struct EmsEvent {
  EmsEventKind kind = EmsEventKind::Beep;
  std::int64_t t = 0;
  std::optional<Tariff> tariff_to;  // set for TariffChange only
  bool operator==(const EmsEvent&) const = default;
};

}  // namespace sgsim
