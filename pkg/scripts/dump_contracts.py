"""Regenerate the contracts/ directory from the built-in contract definitions."""

from pathlib import Path

from og.contracts import ALL_CONTRACTS, dump_contract


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "contracts"
    out.mkdir(exist_ok=True)
    for contract in ALL_CONTRACTS:
        path = out / f"{contract.name}.json"
        dump_contract(contract, path)
        print(path)


if __name__ == "__main__":
    main()
