"""Candidate source generation against a chat-completion endpoint.

Renders a fixed six-prompt sequence (a preamble plus five analysis and
generation steps, the legal contract text interpolated into step 1), runs
them as one conversation against a configurable HTTP endpoint, and
extracts the final fenced code block. The whole conversation is retried
when an attempt yields no code, up to the attempt ceiling. Every attempt
is logged, and the log plus raw responses can be persisted to a run
directory.

Wire protocol (documented here, exercised against a local stub in tests):
the request is a JSON POST ``{"model", "messages", "temperature",
"top_p", "top_k"}`` where messages are ``{"role": "user"|"assistant",
"content": str}``; the response is JSON with either ``{"content": str}``
or the nested ``{"choices": [{"message": {"content": str}}]}`` shape.

The analyzer never depends on this module; it works without any network.
"""

from __future__ import annotations

import json
import re
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import ContractCheckError


class EmptyContract(ContractCheckError):
    pass


class EndpointError(ContractCheckError):
    pass


class NoCodeProduced(ContractCheckError):
    pass


PREAMBLE = (
    "Your task is to help create a Solidity smart contract based on a "
    "provided legal contract. The process will involve several steps where "
    "you will analyze different aspects of the legal contract, document key "
    "elements and necessary assumptions, and then, in the final step, "
    "generate the Solidity code. Each step will focus on a specific part of "
    "the contract to ensure clarity and manage complexity effectively."
)

STEP_TITLES = (
    "Step 1: Contract Parties, Powers, and Obligations",
    "Step 2: Triggers and Timeframes",
    "Step 3: Penalties and Dispute Resolution",
    "Step 4: Legal and Security Compliance",
    "Step 5: Smart Contract Generation",
)

_STEP_1 = """{title}
Analyze the provided legal contract. Identify and list:
1. The parties involved.
2. Their powers and obligations.
Document any assumptions or interpretations necessary for understanding these elements. Here is the legal contract:

\"\"\"
{contract}
\"\"\"
"""

_STEP_2 = """{title}
Based on the previously identified parties, powers and obligations, now focus on:
1. Events that trigger actions within the contract.
2. Timeframes and deadlines relevant to these events, powers, and obligations. Note any interpretations or assumptions related to these triggers and timeframes.
"""

_STEP_3 = """{title}
Continuing from the triggers and timeframes, identify:
1. Any penalties for non-compliance or breaches.
2. Dispute resolution mechanisms specified in the contract.
List assumptions or clarifications needed for implementing these features in the smart contract.
"""

_STEP_4 = """{title}
Before generating the code, ensure the smart contract meets legal and security standards:
1. Discuss potential legal issues and how they can be addressed in the Solidity code.
2. Identify necessary security features and error handling mechanisms to make the smart contract robust and secure.
Document all assumptions and legal considerations.
"""

_STEP_5 = """{title}
Now, compile all the information and insights gathered from previous discussions into a concise and efficient Solidity smart contract. The code should:
1. Be structured clearly with defined sections for parties, powers, obligations, triggers, and dispute resolutions.
2. Include essential comments that clarify sections and key functions for future reference.
3. Ensure legal and technical compliance as discussed, focusing on functional accuracy and security features.
Generate the smart contract code with minimal additional commentary, keeping it focused and lean. Provide brief inline comments only where necessary to explain complex logic or important compliance elements.
"""

_STEP_BODIES = (_STEP_1, _STEP_2, _STEP_3, _STEP_4, _STEP_5)

_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


@dataclass(frozen=True)
class PromptSequence:
    """The six conversation prompts, in send order."""

    prompts: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.prompts)

    def __iter__(self):
        return iter(self.prompts)


@dataclass(frozen=True)
class GenerationConfig:
    endpoint: str
    model: str = "default"
    temperature: float = 0.8
    top_p: float = 0.9
    top_k: int = 40
    max_attempts: int = 3
    timeout: float = 60.0
    # Context-length knob exposed but not enforced client-side.
    max_context_tokens: int | None = None


@dataclass
class AttemptRecord:
    number: int
    responses: list[str] = field(default_factory=list)
    code_found: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "responses": len(self.responses),
            "code_found": self.code_found,
            "error": self.error,
        }


@dataclass
class GenerationResult:
    code: str
    attempts: list[AttemptRecord]


def render_prompts(contract_text: str) -> PromptSequence:
    """Deterministically build the six prompts for one legal contract."""
    if not contract_text or not contract_text.strip():
        raise EmptyContract("the legal contract text is empty")
    prompts = [PREAMBLE]
    prompts.append(_STEP_BODIES[0].format(title=STEP_TITLES[0], contract=contract_text))
    for title, body in zip(STEP_TITLES[1:], _STEP_BODIES[1:]):
        prompts.append(body.format(title=title))
    return PromptSequence(tuple(prompts))


def extract_code_block(text: str) -> str | None:
    """Last fenced code block of a response, or None."""
    blocks = _FENCE_RE.findall(text)
    if not blocks:
        return None
    code = blocks[-1].strip()
    return code or None


def _post(config: GenerationConfig, messages: list[dict]) -> str:
    payload = {
        "model": config.model,
        "messages": messages,
        "temperature": config.temperature,
        "top_p": config.top_p,
        "top_k": config.top_k,
    }
    request = urllib.request.Request(
        config.endpoint,
        data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request, timeout=config.timeout) as response:
            body = response.read().decode("utf-8")
    except (urllib.error.URLError, OSError) as exc:
        raise EndpointError(f"endpoint request failed: {exc}") from exc
    try:
        data = json.loads(body)
    except json.JSONDecodeError as exc:
        raise EndpointError(f"endpoint returned non-JSON body: {exc}") from exc
    if isinstance(data, dict):
        if isinstance(data.get("content"), str):
            return data["content"]
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            pass
    raise EndpointError("endpoint response carries no content field")


def _persist(run_dir: Path | None, sequence: PromptSequence, attempts: list[AttemptRecord]) -> None:
    if run_dir is None:
        return
    run_dir.mkdir(parents=True, exist_ok=True)
    for i, prompt in enumerate(sequence, start=1):
        path = run_dir / f"prompt_{i}.txt"
        if not path.exists():
            path.write_text(prompt, encoding="utf-8")
    for attempt in attempts:
        for i, reply in enumerate(attempt.responses, start=1):
            path = run_dir / f"attempt_{attempt.number}_reply_{i}.txt"
            if not path.exists():
                path.write_text(reply, encoding="utf-8")
    log = [a.to_dict() for a in attempts]
    (run_dir / "attempts.json").write_text(
        json.dumps(log, indent=2) + "\n", encoding="utf-8"
    )


def generate_candidate(
    config: GenerationConfig,
    contract_text: str,
    run_dir: str | Path | None = None,
) -> GenerationResult:
    """Run the prompt sequence, retrying whole conversations without code."""
    sequence = render_prompts(contract_text)
    run_path = Path(run_dir) if run_dir is not None else None
    attempts: list[AttemptRecord] = []
    transport_failures = 0
    for number in range(1, config.max_attempts + 1):
        attempt = AttemptRecord(number=number)
        attempts.append(attempt)
        messages: list[dict] = []
        try:
            for prompt in sequence:
                messages.append({"role": "user", "content": prompt})
                reply = _post(config, messages)
                attempt.responses.append(reply)
                messages.append({"role": "assistant", "content": reply})
        except EndpointError as exc:
            attempt.error = str(exc)
            transport_failures += 1
            _persist(run_path, sequence, attempts)
            continue
        code = extract_code_block(attempt.responses[-1]) if attempt.responses else None
        if code:
            attempt.code_found = True
            _persist(run_path, sequence, attempts)
            if run_path is not None:
                (run_path / "candidate.sol").write_text(code + "\n", encoding="utf-8")
            return GenerationResult(code=code, attempts=attempts)
        attempt.error = "no fenced code block in the final response"
        _persist(run_path, sequence, attempts)
    if transport_failures == config.max_attempts:
        raise EndpointError(
            f"endpoint failed on all {config.max_attempts} attempts"
        )
    raise NoCodeProduced(
        f"no code block produced after {config.max_attempts} attempts"
    )
