#pragma once

#include <exception>
#include <thread>

namespace adx {

template <typename Result>
std::vector<Result> run_waves(std::size_t task_count, std::size_t slots, const std::function<Result(std::size_t)>& task,
                              const std::function<void(std::size_t wave)>& after_wave) {
  if (slots == 0) throw ConfigError("at least one slot is needed");
  std::vector<Result> results(task_count);
  std::vector<std::exception_ptr> errors(task_count);
  for (std::size_t begin = 0, wave = 0; begin < task_count; begin += slots, ++wave) {
    const std::size_t end = std::min(task_count, begin + slots);
    std::vector<std::thread> workers;
    workers.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      workers.emplace_back([&, i] {
        try {
          results[i] = task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (std::size_t i = begin; i < end; ++i)
      if (errors[i]) std::rethrow_exception(errors[i]);
    if (after_wave) after_wave(wave);
  }
  return results;
}

}  // namespace adx
