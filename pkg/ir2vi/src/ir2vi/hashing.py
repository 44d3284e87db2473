import hashlib
import json
from typing import Any


def payload_hash(payload: Any) -> str:
    """Short, order-independent sha256 of a JSON-serializable payload."""
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()
    ).hexdigest()[:16]
