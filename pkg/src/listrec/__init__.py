"""Random linear codes: list decoding and list recovery at desk scale."""
