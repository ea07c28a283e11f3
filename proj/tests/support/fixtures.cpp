/*
   Copyright 2026 The Volcano Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include "fixtures.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace volcano::testing {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$'; }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in{text};
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

}  // namespace

const std::vector<PublishedListing>& published_listings() {
    static const std::vector<PublishedListing> kListings = {
        {"ctu1", "Call-to-unknown Vulnerability Signature-1", "CALL_TO_UNKNOWN",
         "function initialize() public {\n"
         "\tnew_owner = msg.sender;\n"
         "}\n",
         4, {"initialize", "new_owner"}, {0, 1}, {1, 1}},
        {"ctu2", "Call-to-unknown Vulnerability Signature-2", "CALL_TO_UNKNOWN",
         "function() payable {\n"
         "    if (msg.data.length > 0)\n"
         "      owner.delegatecall(msg.data); \n"
         "  }\n",
         4, {"owner"}, {0, 2}, {1, 2}},
        {"dos1", "DoS Vulnerability Signature-1", "DOS",
         "function kill(address malicious) external {\n"
         "    suicide(malicious);\n"
         "    }\n",
         4, {"kill", "malicious"}, {0, 1}, {1, 1}},
        {"dos2", "DoS Vulnerability Signature-2", "DOS",
         "function kill(address malicious) external {\n"
         "    selfdestruct(malicious);\n"
         "    }\n",
         4, {"kill", "malicious"}, {0, 1}, {1, 1}},
        {"dos3", "DoS Vulnerability Signature-3", "DOS",
         "function sendPayments() public returns (bool){\n"
         "         for(uint i=0;i<n;i++) {\n"
         "            addresses.send(msg.sender);\n"
         "        }    return true;\n"
         "    }\n",
         8, {"sendPayments", "i", "n", "addresses"}, {0, 1, 2, 3}, {2, 2}},
        {"dos4", "DoS Vulnerability Signature-4", "DOS",
         "function sendPayments() public returns (bool){\n"
         "         for(uint i=0;i<n;i++) {\n"
         "             require(addresses.send(msg.sender));\n"
         "        }    \n"
         "        return true;\n"
         "    }\n",
         8, {"sendPayments", "i", "n", "addresses"}, {0, 1, 2, 3, 4}, {2, 2}},
        {"reentrancy", "Re-entrancy Vulnerability Signature", "REENTRANCY",
         "function externalSend(uint amountToSend) {\n"
         "\tif(balance >= amountToSend)\n"
         "\tmsg.sender.call.value(amountToSend)();\n"
         "\tbalance -= amountToSend; //state variable updated after external call function is executed\n"
         "}\n",
         5, {"externalSend", "amountToSend", "balance"}, {0, 2, 3}, {3, 3}},
        {"integer", "Integer Underflow/Overflow Vulnerability Signature", "INTEGER_UO",
         "function externalSend(uint amountToSend) {\n"
         "\tif(balance >= amountToSend)\n"
         "\tmsg.sender.call.value(amountToSend)();\n"
         "\tbalance -= amountToSend; //\n"
         "}\n",
         5, {"externalSend", "amountToSend", "balance"}, {0, 2, 3}, {3, 3}},
        {"misEx", "Mishandled Exceptions Vulnerability Signature", "MISHANDLED_EXCEPTIONS",
         "function externalCall(uint str) {\n"
         "\tmsg.sender.delegateCall(str); //without checking for return value\n"
         "}\n",
         4, {"externalCall", "str", "delegateCall"}, {0, 1}, {1, 1}},
        {"weak", "Weak Access Modifiers Vulnerability Signature", "WEAK_MODIFIERS",
         "function initialize() public { //weak access modifier for the function initialize\n"
         "\tnew_owner = msg.sender;\n"
         "}\n",
         4, {"initialize", "new_owner"}, {0, 1}, {1, 1}},
        {"outofGasEx", "Out-of-Gas Exception Vulnerability Signature", "OUT_OF_GAS",
         "function externalSend(uint amountToSend) {\n"
         "\tif(balance >= amountToSend)\n"
         "\t msg.sender.send(amountToSend); //gasless-send\n"
         "}\n",
         4, {"externalSend", "amountToSend", "balance"}, {0, 2}, {1, 2}},
    };
    return kListings;
}

const std::vector<std::string>& neutral_statements() {
    static const std::vector<std::string> kStatements = {
        "require(msg.value >= 0);",
        "assert(msg.sender != address(0));",
        "require(now > 0);",
        "assert(msg.data.length >= 0);",
        "require(msg.sender != address(this));",
        "assert(true);",
        "require(msg.value < 1000 ether);",
        "require(tx.origin == msg.sender);",
    };
    return kStatements;
}

std::string rename_words(const std::string& text, const std::map<std::string, std::string>& renaming) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (ident_char(text[i]) && (i == 0 || !ident_char(text[i - 1]))) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            const std::string word = text.substr(i, j - i);
            const auto it = renaming.find(word);
            out += it == renaming.end() ? word : it->second;
            i = j;
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

std::string random_identifier(std::mt19937_64& rng, std::size_t length) {
    static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    std::uniform_int_distribution<std::size_t> pick{0, kLetters.size() - 1};
    // The "v_" prefix keeps generated names clear of every Solidity keyword.
    std::string out = "v_";
    for (std::size_t i = 0; i < length; ++i) out.push_back(kLetters[pick(rng)]);
    return out;
}

std::map<std::string, std::string> random_renaming(const std::vector<std::string>& identifiers,
                                                   std::mt19937_64& rng) {
    std::map<std::string, std::string> out;
    std::set<std::string> used;
    for (const auto& id : identifiers) {
        std::string fresh;
        do {
            fresh = random_identifier(rng);
        } while (!used.insert(fresh).second);
        out[id] = fresh;
    }
    return out;
}

std::string insert_after_line(const std::string& text, int line_index, const std::string& statement) {
    auto lines = lines_of(text);
    lines.insert(lines.begin() + line_index + 1, "    " + statement);
    return join_lines(lines);
}

std::string delete_lines(const std::string& text, int first, int last) {
    auto lines = lines_of(text);
    lines.erase(lines.begin() + first, lines.begin() + last + 1);
    return join_lines(lines);
}

const std::vector<std::string>& benign_functions() {
    static const std::vector<std::string> kFunctions = {
        // Checks-effects-interactions withdrawals.
        "function withdraw(uint amount) public {\n"
        "    require(balances[msg.sender] >= amount);\n"
        "    balances[msg.sender] -= amount;\n"
        "    msg.sender.transfer(amount);\n"
        "}\n",
        "function withdrawAll() external {\n"
        "    uint owed = credit[msg.sender];\n"
        "    require(owed > 0, \"nothing owed\");\n"
        "    credit[msg.sender] = 0;\n"
        "    (bool ok, ) = msg.sender.call{value: owed}(\"\");\n"
        "    require(ok, \"transfer failed\");\n"
        "}\n",
        "function claimRefund() public {\n"
        "    uint refund = refunds[msg.sender];\n"
        "    refunds[msg.sender] = 0;\n"
        "    totalRefunds -= refund;\n"
        "    msg.sender.transfer(refund);\n"
        "    emit Refunded(msg.sender, refund);\n"
        "}\n",
        // Access-guarded selfdestruct.
        "function destroy() public {\n"
        "    require(msg.sender == owner);\n"
        "    selfdestruct(owner);\n"
        "}\n",
        "function shutdown(address payable recipient) external {\n"
        "    require(msg.sender == owner, \"only owner\");\n"
        "    require(recipient != address(0));\n"
        "    emit Shutdown(recipient);\n"
        "    selfdestruct(recipient);\n"
        "}\n",
        "function close() public onlyOwner {\n"
        "    require(msg.sender == owner);\n"
        "    emit Closed(block.number);\n"
        "    selfdestruct(owner);\n"
        "}\n",
        // Loops without external calls.
        "function sum(uint[] memory values) public pure returns (uint total) {\n"
        "    for (uint k = 0; k < values.length; k++) {\n"
        "        total += values[k];\n"
        "    }\n"
        "}\n",
        "function countActive() public view returns (uint count) {\n"
        "    for (uint k = 0; k < members.length; k++) {\n"
        "        if (active[members[k]]) {\n"
        "            count++;\n"
        "        }\n"
        "    }\n"
        "    return count;\n"
        "}\n",
        "function resetScores(uint limit) public onlyOwner {\n"
        "    require(limit <= players.length);\n"
        "    for (uint k = 0; k < limit; k++) {\n"
        "        scores[players[k]] = 0;\n"
        "    }\n"
        "    lastReset = now;\n"
        "}\n",
        // Plain state management.
        "function transferOwnership(address newOwner) public {\n"
        "    require(msg.sender == owner);\n"
        "    require(newOwner != address(0));\n"
        "    emit OwnershipTransferred(owner, newOwner);\n"
        "    owner = newOwner;\n"
        "}\n",
        "function deposit() public payable {\n"
        "    require(msg.value > 0);\n"
        "    balances[msg.sender] += msg.value;\n"
        "    emit Deposit(msg.sender, msg.value);\n"
        "}\n",
        "function approve(address spender, uint256 amount) public returns (bool) {\n"
        "    allowed[msg.sender][spender] = amount;\n"
        "    emit Approval(msg.sender, spender, amount);\n"
        "    return true;\n"
        "}\n",
        "function transfer(address to, uint256 amount) public returns (bool) {\n"
        "    require(to != address(0));\n"
        "    require(amount <= balances[msg.sender]);\n"
        "    balances[msg.sender] = balances[msg.sender] - amount;\n"
        "    balances[to] = balances[to] + amount;\n"
        "    emit Transfer(msg.sender, to, amount);\n"
        "    return true;\n"
        "}\n",
        "function balanceOf(address holder) public view returns (uint256) {\n"
        "    return balances[holder];\n"
        "}\n",
        "function totalSupply() public view returns (uint256) {\n"
        "    return supply - balances[address(0)];\n"
        "}\n",
        "function pause() public {\n"
        "    require(msg.sender == owner);\n"
        "    require(!paused);\n"
        "    paused = true;\n"
        "    emit Paused();\n"
        "}\n",
        "function safeAdd(uint a, uint b) internal pure returns (uint) {\n"
        "    uint c = a + b;\n"
        "    require(c >= a, \"overflow\");\n"
        "    return c;\n"
        "}\n",
        "function safeSub(uint a, uint b) internal pure returns (uint) {\n"
        "    require(b <= a, \"underflow\");\n"
        "    return a - b;\n"
        "}\n",
        "function setPrice(uint newPrice) external onlyOwner {\n"
        "    require(newPrice > 0 && newPrice < 10 ether);\n"
        "    price = newPrice;\n"
        "    emit PriceChanged(newPrice);\n"
        "}\n",
        "function buy(uint quantity) public payable {\n"
        "    require(quantity > 0);\n"
        "    require(msg.value == quantity * price);\n"
        "    require(stock >= quantity);\n"
        "    stock -= quantity;\n"
        "    owned[msg.sender] += quantity;\n"
        "}\n",
        "function register(string memory name) public {\n"
        "    require(bytes(name).length > 0);\n"
        "    require(!registered[msg.sender]);\n"
        "    registered[msg.sender] = true;\n"
        "    names[msg.sender] = name;\n"
        "}\n",
        "function vote(uint proposal) external {\n"
        "    Voter storage sender = voters[msg.sender];\n"
        "    require(!sender.voted, \"already voted\");\n"
        "    sender.voted = true;\n"
        "    sender.vote = proposal;\n"
        "    proposals[proposal].voteCount += sender.weight;\n"
        "}\n",
    };
    return kFunctions;
}

std::string random_function(const std::string& name, int statements, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind{0, 5};
    std::uniform_int_distribution<int> literal{1, 1000000};
    std::ostringstream out;
    out << "function " << name << "(uint a, uint b) public returns (uint) {\n";
    for (int s = 0; s < statements; ++s) {
        const int lit = literal(rng);
        switch (kind(rng)) {
            case 0: out << "    a = a + " << lit << ";\n"; break;
            case 1: out << "    b = b * " << lit << " + a;\n"; break;
            case 2: out << "    if (a > " << lit << ") {\n        b = a - " << lit << ";\n    }\n"; break;
            case 3: out << "    total[msg.sender] += " << lit << ";\n"; break;
            case 4: out << "    require(a != " << lit << ", \"bad\");\n"; break;
            default: out << "    emit Step(a, b, " << lit << ");\n"; break;
        }
    }
    out << "    return a + b;\n}\n";
    return std::move(out).str();
}

std::string wrap_contract(const std::string& name, const std::string& pragma,
                          const std::vector<std::string>& functions) {
    std::ostringstream out;
    if (!pragma.empty()) out << "pragma solidity " << pragma << ";\n\n";
    out << "contract " << name << " {\n";
    for (const auto& f : functions) {
        std::istringstream in{f};
        for (std::string line; std::getline(in, line);) out << "    " << line << '\n';
        out << '\n';
    }
    out << "}\n";
    return std::move(out).str();
}

}  // namespace volcano::testing
