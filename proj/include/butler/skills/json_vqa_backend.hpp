#pragma once

#include <memory>

#include "butler/common/json_backend.hpp"
#include "butler/skills/skills.hpp"

namespace butler::skills {

/// VQA over a JSON backend: {question, image (PNG base64), mark: [x, y] | null} -> {answer}.
class JsonVqaBackend : public VqaBackend {
 public:
  explicit JsonVqaBackend(std::shared_ptr<JsonBackend> backend) : backend_(std::move(backend)) {}
  std::string ask(const std::string& question, const perception::Frame& frame,
                  std::optional<perception::PixelPoint> mark) override;

 private:
  std::shared_ptr<JsonBackend> backend_;
};

}  // namespace butler::skills
