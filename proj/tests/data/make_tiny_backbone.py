"""Regenerates tiny_backbone.onnx and its reference outputs.

conv(3->4, k3, s2, p1) -> relu -> global average pool -> flatten, 32x32 input.
"""
import json
import math
import pathlib

import torch

HERE = pathlib.Path(__file__).parent


def probe(batch):
    x = torch.zeros(batch, 3, 32, 32, dtype=torch.float64)
    for b in range(batch):
        for c in range(3):
            for i in range(32):
                for j in range(32):
                    x[b, c, i, j] = math.sin(0.1 * (b + 1) * (i + 1) + 0.3 * c) * math.cos(0.05 * j)
    return x


def main():
    torch.manual_seed(7)
    net = torch.nn.Sequential(
        torch.nn.Conv2d(3, 4, 3, stride=2, padding=1),
        torch.nn.ReLU(),
        torch.nn.AdaptiveAvgPool2d(1),
        torch.nn.Flatten(),
    ).eval()
    torch.onnx.export(net, torch.zeros(1, 3, 32, 32), HERE / "tiny_backbone.onnx",
                      input_names=["input"], output_names=["features"],
                      dynamic_axes={"input": {0: "batch"}, "features": {0: "batch"}},
                      opset_version=13, dynamo=False)
    with torch.no_grad():
        out = net(probe(2).float()).double()
    (HERE / "tiny_backbone_expected.json").write_text(json.dumps({"features": out.tolist()}, indent=1))


if __name__ == "__main__":
    main()
