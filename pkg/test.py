from src.config import load_config
from src.sets import parse_set_file
from src.wavelets import check_wavelet_set
cfg = load_config()
verdict = check_wavelet_set(parse_set_file("data/sets/shannon_p2.set"), cfg["VILENKIN_DEPTH"])
print(cfg["VILENKIN_DEPTH"], verdict.status.value)
