/** Pure operations on the editable chip list (title parts). */

export const MAX_PARTS = 8;

export function addChip(parts: string[], text = ""): string[] {
  return [...parts, text];
}

export function updateChip(parts: string[], index: number, text: string): string[] {
  return parts.map((p, i) => (i === index ? text : p));
}

export function deleteChip(parts: string[], index: number): string[] {
  return parts.filter((_, i) => i !== index);
}

export function moveChip(parts: string[], from: number, to: number): string[] {
  if (from === to || from < 0 || from >= parts.length || to < 0 || to >= parts.length) {
    return parts;
  }
  const next = [...parts];
  const [chip] = next.splice(from, 1);
  next.splice(to, 0, chip);
  return next;
}

/** Human-readable reason the list cannot be submitted, or null when valid. */
export function partsProblem(parts: string[], maxParts = MAX_PARTS): string | null {
  const trimmed = parts.map((p) => p.trim());
  if (trimmed.length === 0) {
    return "add at least one title part";
  }
  if (trimmed.some((p) => !p)) {
    return "every part needs some text";
  }
  if (trimmed.length > maxParts) {
    return `at most ${maxParts} parts (got ${trimmed.length})`;
  }
  return null;
}
