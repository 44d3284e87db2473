"""Published architecture and optimization protocol."""

from ir2vi.django_settings import (
    IR2VI_ADAM_BETAS,
    IR2VI_BATCH_SIZE,
    IR2VI_CROP_SIZE,
    IR2VI_EPOCHS_CONST,
    IR2VI_EPOCHS_DECAY,
    IR2VI_LAMBDA_CYC,
    IR2VI_LAMBDA_ROI,
    IR2VI_LEAKY_SLOPE,
    IR2VI_LR,
    IR2VI_REPLAY_BUFFER,
    IR2VI_ROI_SIZE,
)

PUBLISHED_PROFILE = {
    "name": "published",
    "scene": {
        "height": 320,
        "width": 320,
        "min_objects": 1,
        "max_objects": 4,
        "min_object_size": 24,
        "max_object_size": 64,
        "min_gap": 12,
    },
    "generator": {"base_filters": 32, "n_res_blocks": 9, "structure_connection": True},
    "discriminator": {
        "channel_plan": [[64, 2], [128, 2], [256, 2], [512, 2], [512, 1]],
        "leaky_slope": IR2VI_LEAKY_SLOPE,
    },
    "roi": {"out_size": IR2VI_ROI_SIZE, "method": "bilinear_resize"},
    "train": {
        "lr": IR2VI_LR,
        "epochs_const": IR2VI_EPOCHS_CONST,
        "epochs_decay": IR2VI_EPOCHS_DECAY,
        "batch_size": IR2VI_BATCH_SIZE,
        "weights": {"lambda_cyc": IR2VI_LAMBDA_CYC, "lambda_roi": IR2VI_LAMBDA_ROI},
        "adam_beta1": IR2VI_ADAM_BETAS[0],
        "adam_beta2": IR2VI_ADAM_BETAS[1],
        "replay_buffer": IR2VI_REPLAY_BUFFER,
        "norm": "batch",
        "crop_size": IR2VI_CROP_SIZE,
    },
    "data": {"count": 200},
}
