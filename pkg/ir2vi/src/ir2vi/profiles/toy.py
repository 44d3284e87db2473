"""Desk-scale run on 64x64 synthetic scenes (CPU, minutes)."""

TOY_PROFILE = {
    "name": "toy",
    "scene": {"height": 64, "width": 64, "min_object_size": 10, "max_object_size": 18},
    "generator": {"base_filters": 8, "n_res_blocks": 3},
    "discriminator": {"channel_plan": [[16, 2], [32, 2], [64, 2], [64, 1]]},
    "roi": {"out_size": 32},
    "train": {
        "epochs_const": 10,
        "epochs_decay": 10,
        "batch_size": 4,
        "norm": "instance",
        "crop_size": 64,
        "checkpoint_every": 5,
    },
    "data": {"count": 200},
}
