import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizer

WORDS = [
    "[PAD]",
    "[UNK]",
    "[CLS]",
    "[SEP]",
    "[MASK]",
    "rex",
    "terra",
    "##m",
    "habet",
    "dedit",
    "will",
    "##el",
    "##mus",
    "carta",
    "abbas",
    "et",
]

HIDDEN_SIZE = 32


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    """A tiny randomly initialized BERT checkpoint saved to disk."""
    path = tmp_path_factory.mktemp("checkpoint")
    tokenizer = BertTokenizer(vocab={w: i for i, w in enumerate(WORDS)}, do_lower_case=True)
    config = BertConfig(
        vocab_size=len(WORDS),
        hidden_size=HIDDEN_SIZE,
        num_hidden_layers=4,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(0)
    model = BertModel(config)
    model.eval()
    model.save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


@pytest.fixture
def slice_file(tmp_path):
    """Five tokenized sentences, one per line."""
    path = tmp_path / "NOR.txt"
    path.write_text(
        "rex terram habet\n"
        "willelmus dedit terram\n"
        "abbas habet cartam\n"
        "rex et abbas\n"
        "terram dedit rex willelmus\n"
    )
    return path
