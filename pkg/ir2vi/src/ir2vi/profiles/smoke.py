"""Tiny end-to-end check: 8-filter networks, 4 images, 2 epochs."""

SMOKE_PROFILE = {
    "name": "smoke",
    "scene": {
        "height": 32,
        "width": 32,
        "max_objects": 2,
        "min_object_size": 8,
        "max_object_size": 12,
        "min_gap": 4,
    },
    "generator": {"base_filters": 8, "n_res_blocks": 1},
    "discriminator": {"channel_plan": [[8, 2], [16, 2], [16, 1]]},
    "roi": {"out_size": 16},
    "train": {
        "epochs_const": 1,
        "epochs_decay": 1,
        "batch_size": 2,
        "norm": "instance",
        "crop_size": 32,
        "replay_buffer": 4,
    },
    "data": {"count": 4},
}
